import init, { exactIntegral, scaledCurve, brauerTables } from "./pkg/weingarten_web.js";

const $ = (id) => document.getElementById(id);

function showError(el, e) {
  el.textContent = String(e.message ?? e);
  el.classList.add("error");
}

function computeExact() {
  const out = $("exact-out");
  out.classList.remove("error");
  try {
    const r = JSON.parse(exactIntegral($("matrix").value));
    const poles = r.poles;
    out.textContent = [
      `I(a)     = ${r.text}`,
      `k        = ${r.k}, admissible: ${r.admissible}`,
      `at n=inf : ${r.series_text}`,
      `poles    : {${poles.actual.join(", ")}} within candidates {${poles.candidates.join(", ")}}: ${poles.contained}`,
    ].join("\n");
  } catch (e) {
    showError(out, e);
  }
}

function plotCurve() {
  const msg = $("curve-msg");
  msg.textContent = "";
  msg.classList.remove("error");
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let r;
  try {
    r = JSON.parse(scaledCurve($("matrix").value, Number($("n-from").value), Number($("n-to").value)));
  } catch (e) {
    showError(msg, e);
    return;
  }
  const pts = r.points.filter((p) => Number.isFinite(p.value));
  if (pts.length === 0) {
    msg.textContent = "no points in range";
    return;
  }
  msg.textContent = `k = ${r.k}, e(a) = ${r.e}, mu(a) = ${r.mu}`;
  const pad = 40;
  const xs = pts.map((p) => p.n);
  const ys = pts.map((p) => p.value).concat([r.limit]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs, Math.min(...xs) + 1)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-9) { y0 -= 1; y1 += 1; }
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (canvas.width - 2 * pad);
  const sy = (y) => canvas.height - pad - ((y - y0) / (y1 - y0)) * (canvas.height - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, canvas.width - 2 * pad, canvas.height - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText(y1.toPrecision(4), 2, pad);
  ctx.fillText(y0.toPrecision(4), 2, canvas.height - pad);
  ctx.fillText(`n = ${x0}`, pad, canvas.height - pad + 16);
  ctx.fillText(`n = ${x1}`, canvas.width - pad - 40, canvas.height - pad + 16);

  ctx.setLineDash([6, 4]);
  ctx.strokeStyle = "#c33";
  ctx.beginPath();
  ctx.moveTo(pad, sy(r.limit));
  ctx.lineTo(canvas.width - pad, sy(r.limit));
  ctx.stroke();
  ctx.setLineDash([]);

  ctx.strokeStyle = "#236";
  ctx.fillStyle = "#236";
  ctx.beginPath();
  pts.forEach((p, i) => (i ? ctx.lineTo(sx(p.n), sy(p.value)) : ctx.moveTo(sx(p.n), sy(p.value))));
  ctx.stroke();
  for (const p of pts) {
    ctx.beginPath();
    ctx.arc(sx(p.n), sy(p.value), 2.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

let heat = null;

function drawHeatmap() {
  const info = $("heat-info");
  info.classList.remove("error");
  const canvas = $("heatmap");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  try {
    heat = JSON.parse(brauerTables(Number($("k").value)));
  } catch (e) {
    heat = null;
    showError(info, e);
    return;
  }
  const size = heat.pairings.length;
  const cell = canvas.width / size;
  const maxDist = Math.max(1, heat.k - 1);
  for (let i = 0; i < size; i++) {
    for (let j = 0; j < size; j++) {
      const t = heat.distance[i][j] / maxDist;
      const shade = Math.round(255 * (1 - 0.8 * t));
      ctx.fillStyle = `rgb(${shade}, ${shade}, 255)`;
      ctx.fillRect(j * cell, i * cell, Math.ceil(cell), Math.ceil(cell));
    }
  }
  info.textContent = `${size} pairings; hover a cell`;
}

function hoverHeatmap(ev) {
  if (!heat) return;
  const canvas = $("heatmap");
  const rect = canvas.getBoundingClientRect();
  const size = heat.pairings.length;
  const j = Math.floor(((ev.clientX - rect.left) / rect.width) * size);
  const i = Math.floor(((ev.clientY - rect.top) / rect.height) * size);
  if (i < 0 || j < 0 || i >= size || j >= size) return;
  $("heat-info").textContent =
    `${heat.pairings[i]} to ${heat.pairings[j]}: distance ${heat.distance[i][j]}, mobius ${heat.mobius[i][j]}`;
}

await init();
$("compute").addEventListener("click", computeExact);
$("plot").addEventListener("click", plotCurve);
$("heat").addEventListener("click", drawHeatmap);
$("heatmap").addEventListener("mousemove", hoverHeatmap);
computeExact();
plotCurve();
drawHeatmap();
