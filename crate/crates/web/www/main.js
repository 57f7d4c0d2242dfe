import init, { wigner_heatmap, marginal_curves, spin_window } from "./pkg/phasespace_web.js";

const N = 128;
const $ = (id) => document.getElementById(id);

function params() {
  return { state: $("state").value.trim(), hbar: Number($("hbar").value), half: Number($("half").value) };
}

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

// blue for negative values, red for positive, white at zero
function colour(v, scale) {
  const s = Math.max(-1, Math.min(1, v / scale));
  const w = Math.round(255 * (1 - Math.abs(s)));
  return s >= 0 ? [255, w, w] : [w, w, 255];
}

function drawHeatmap() {
  const { state, hbar, half } = params();
  const v = wigner_heatmap(state, hbar, half, N);
  const scale = v.reduce((m, x) => Math.max(m, Math.abs(x)), 0) || 1;
  const canvas = $("heat");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(N, N);
  for (let i = 0; i < N; i++) {
    for (let j = 0; j < N; j++) {
      // x to the right, p upwards
      const [r, g, b] = colour(v[i * N + j], scale);
      const k = 4 * ((N - 1 - j) * N + i);
      img.data.set([r, g, b, 255], k);
    }
  }
  const tmp = new OffscreenCanvas(N, N);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
  const cell = (2 * half / N) ** 2;
  const min = Math.min(...v);
  const neg = v.reduce((s, x) => s + Math.max(-x, 0), 0) * cell;
  $("heat-info").textContent = `min ${min.toFixed(5)}  max ${Math.max(...v).toFixed(5)}  negative volume ${neg.toFixed(5)}`;
}

function drawMarginals() {
  const { state, hbar, half } = params();
  const theta = Number($("theta").value);
  $("theta-val").textContent = `${theta.toFixed(2)} rad  (a, b) = (${Math.cos(theta).toFixed(3)}, ${Math.sin(theta).toFixed(3)})`;
  const v = marginal_curves(state, hbar, half, N, theta);
  const m = v.length / 3;
  const z = v.subarray(0, m), quasi = v.subarray(m, 2 * m), measured = v.subarray(2 * m);
  const canvas = $("marg");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const top = Math.max(...quasi, ...measured) || 1;
  const px = (k) => ((z[k] - z[0]) / (z[m - 1] - z[0])) * w;
  const py = (g) => h - 10 - (g / top) * (h - 20);
  const line = (g, style, dash) => {
    ctx.strokeStyle = style;
    ctx.setLineDash(dash);
    ctx.beginPath();
    for (let k = 0; k < m; k++) (k ? ctx.lineTo : ctx.moveTo).call(ctx, px(k), py(g[k]));
    ctx.stroke();
  };
  line(quasi, "#000", []);
  line(measured, "#c00", [5, 4]);
  let gap = 0;
  for (let k = 0; k < m; k++) gap = Math.max(gap, Math.abs(quasi[k] - measured[k]));
  $("marg-info").textContent = `max difference ${gap.toExponential(2)}`;
}

function drawSpin() {
  const s = spin_window(Number($("bt").value), Number($("bp").value), Number($("t").value));
  const [z, x, y, lo, hi, ...f] = s;
  const names = ["f++", "f+-", "f-+", "f--"];
  const comps = f.map((v, k) => `<span class="${v < -1e-14 ? "neg" : ""}">${names[k]} = ${v.toFixed(4)}</span>`).join("  ");
  $("spin-info").innerHTML =
    `⟨Z⟩ = ${z.toFixed(4)}  ⟨X⟩ = ${x.toFixed(4)}  ⟨Y⟩ = ${y.toFixed(4)}\n` +
    `t = ${Number($("t").value).toFixed(2)}   nonnegative for t in [${lo.toFixed(4)}, ${hi.toFixed(4)}]\n` + comps;
}

function guarded(f) {
  return () => {
    try {
      showError(null);
      f();
    } catch (e) {
      showError(e);
    }
  };
}

await init();
const redraw = guarded(() => {
  drawHeatmap();
  drawMarginals();
});
$("draw").addEventListener("click", redraw);
$("theta").addEventListener("input", guarded(drawMarginals));
for (const id of ["bt", "bp", "t"]) $(id).addEventListener("input", guarded(drawSpin));
redraw();
guarded(drawSpin)();
