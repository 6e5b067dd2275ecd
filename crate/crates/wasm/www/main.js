import init, { density_profile, limiting_distribution, wave_field } from "./pkg/nodalvol_wasm.js";

const $ = (id) => document.getElementById(id);
const PAD = { left: 50, right: 15, top: 15, bottom: 30 };

function frame(canvas, xmin, xmax, ymin, ymax) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const w = canvas.width - PAD.left - PAD.right;
  const h = canvas.height - PAD.top - PAD.bottom;
  const sx = (x) => PAD.left + ((x - xmin) / (xmax - xmin)) * w;
  const sy = (y) => PAD.top + (1 - (y - ymin) / (ymax - ymin)) * h;
  ctx.strokeStyle = "#888";
  ctx.strokeRect(PAD.left, PAD.top, w, h);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  for (let i = 0; i <= 4; i++) {
    const x = xmin + ((xmax - xmin) * i) / 4;
    const y = ymin + ((ymax - ymin) * i) / 4;
    ctx.fillText(x.toPrecision(3), sx(x) - 12, canvas.height - 10);
    ctx.fillText(y.toPrecision(3), 5, sy(y) + 4);
  }
  return { ctx, sx, sy };
}

function polyline(ctx, xs, ys, sx, sy, colour, dashed) {
  ctx.strokeStyle = colour;
  ctx.lineWidth = 1.5;
  ctx.setLineDash(dashed ? [6, 4] : []);
  ctx.beginPath();
  let open = false;
  for (let i = 0; i < xs.length; i++) {
    if (!Number.isFinite(ys[i])) {
      open = false;
      continue;
    }
    open ? ctx.lineTo(sx(xs[i]), sy(ys[i])) : ctx.moveTo(sx(xs[i]), sy(ys[i]));
    open = true;
  }
  ctx.stroke();
  ctx.setLineDash([]);
}

function guarded(statusId, work) {
  const status = $(statusId);
  status.className = "status";
  status.textContent = "working...";
  // let the status line paint before the computation blocks the page
  setTimeout(() => {
    const t0 = performance.now();
    try {
      const note = work();
      status.textContent = `${note} (${(performance.now() - t0).toFixed(0)} ms)`;
    } catch (e) {
      status.className = "status error";
      status.textContent = String(e);
    }
  }, 10);
}

function drawProfile() {
  guarded("profile-status", () => {
    const dim = Number($("profile-dim").value);
    const rmax = Number($("profile-rmax").value);
    const p = density_profile(dim, rmax, 801);
    const ratios = p.ratios;
    const ymax = Math.max(...ratios) * 1.05;
    const { ctx, sx, sy } = frame($("profile-canvas"), 0, rmax, 0, ymax);
    polyline(ctx, p.distances, new Array(ratios.length).fill(1), sx, sy, "#aaa", true);
    polyline(ctx, p.distances, p.asymptote, sx, sy, "#d62", true);
    polyline(ctx, p.distances, ratios, sx, sy, "#16c", false);
    return `ratio at the wall ${ratios[0].toFixed(4)}`;
  });
}

function drawDistribution() {
  guarded("dist-status", () => {
    const h = limiting_distribution(
      Number($("dist-dim").value),
      Number($("dist-energy").value),
      Number($("dist-modes").value),
      Number($("dist-bins").value),
    );
    const edges = h.edges;
    const dens = h.densities;
    const limit = h.limit;
    const finite = limit.filter(Number.isFinite);
    const ymax = Math.min(Math.max(...dens, ...finite), 3 * Math.max(...dens)) * 1.05;
    const { ctx, sx, sy } = frame($("dist-canvas"), edges[0], edges[edges.length - 1], 0, ymax);
    ctx.fillStyle = "rgba(30, 100, 200, 0.45)";
    for (let i = 0; i < dens.length; i++) {
      const top = sy(Math.min(dens[i], ymax));
      ctx.fillRect(sx(edges[i]), top, sx(edges[i + 1]) - sx(edges[i]), sy(0) - top);
    }
    const centres = dens.map((_, i) => 0.5 * (edges[i] + edges[i + 1]));
    polyline(ctx, centres, limit.map((y) => Math.min(y, ymax)), sx, sy, "#d62", false);
    return `${h.modes} modes`;
  });
}

function drawWave() {
  guarded("wave-status", () => {
    const canvas = $("wave-canvas");
    const xMax = Number($("wave-width").value);
    const yMax = (xMax * canvas.height) / canvas.width;
    const cols = canvas.width / 2;
    const rows = canvas.height / 2;
    const v = wave_field(
      Number($("wave-n").value),
      BigInt($("wave-seed").value),
      xMax,
      yMax,
      cols,
      rows,
    );
    const img = new ImageData(cols, rows);
    for (let j = 0; j < rows; j++) {
      // row 0 is the wall, drawn at the bottom
      const out = rows - 1 - j;
      for (let i = 0; i < cols; i++) {
        const x = v[j * cols + i];
        const k = 4 * (out * cols + i);
        const mag = Math.min(1, Math.abs(x) / 2);
        const c = x >= 0 ? [230, 120, 40] : [40, 110, 220];
        img.data[k] = 255 - (255 - c[0]) * (0.35 + 0.65 * mag);
        img.data[k + 1] = 255 - (255 - c[1]) * (0.35 + 0.65 * mag);
        img.data[k + 2] = 255 - (255 - c[2]) * (0.35 + 0.65 * mag);
        img.data[k + 3] = 255;
      }
    }
    const scratch = new OffscreenCanvas(cols, rows);
    scratch.getContext("2d").putImageData(img, 0, 0);
    const ctx = canvas.getContext("2d");
    ctx.imageSmoothingEnabled = true;
    ctx.drawImage(scratch, 0, 0, canvas.width, canvas.height);
    return `${cols} x ${rows} samples, lengths in units of 1/k`;
  });
}

await init();
$("profile-run").onclick = drawProfile;
$("dist-run").onclick = drawDistribution;
$("wave-run").onclick = drawWave;
$("wave-next").onclick = () => {
  $("wave-seed").value = Number($("wave-seed").value) + 1;
  drawWave();
};
drawProfile();
drawDistribution();
drawWave();
