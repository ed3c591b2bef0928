// Build the module first:
//   cargo build -p gyrospin-web --release --target wasm32-unknown-unknown
//   wasm-bindgen --target web --out-dir crates/web/www/pkg \
//       target/wasm32-unknown-unknown/release/gyrospin_web.wasm
import init, { surfaces, alignmentCurve, interferenceCurve } from "./pkg/gyrospin_web.js";

function plot(canvas, xs, series, xlabel, ylabel) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 50;
  ctx.clearRect(0, 0, w, h);
  const finite = (v) => v.filter(Number.isFinite);
  const ys = series.flatMap((s) => finite(s.values));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad + ((y0 - y) / (y1 - y0)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.fillText(xlabel, w / 2 - 30, h - 12);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 16);
  ctx.fillText(x1.toPrecision(3), w - pad - 40, h - pad + 16);
  ctx.fillText(y1.toPrecision(3), 4, pad + 4);
  ctx.fillText(y0.toPrecision(3), 4, h - pad);
  ctx.fillText(ylabel, pad + 6, pad - 8);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash || []);
    ctx.beginPath();
    s.values.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  flat.forEach((v, i) => cols[i % width].push(v));
  return cols;
}

function bind(id, draw) {
  const sec = document.getElementById(id);
  const canvas = sec.querySelector("canvas");
  const err = sec.querySelector(".err");
  const val = (name) => Number(sec.querySelector(`input[name=${name}]`).value);
  const update = () => {
    try {
      err.textContent = "";
      draw(val, canvas);
    } catch (e) {
      err.textContent = e.message || String(e);
    }
  };
  sec.querySelectorAll("input").forEach((el) => el.addEventListener("input", update));
  update();
}

await init();

bind("surfaces", (v, c) => {
  const [g, plus, minus] = columns(surfaces(v("l3"), v("aspect"), v("b"), v("rot"), 721), 3);
  plot(c, g, [
    { values: plus, color: "#1f5fa8" },
    { values: minus, color: "#c0392b", dash: [6, 4] },
  ], "gamma [rad]", "Omega± [rad/s]");
});

bind("alignment", (v, c) => {
  const [b, mean, variance] = columns(alignmentCurve(v("l3"), v("aspect"), v("rot"), v("t"), 1, v("bmin"), v("bmax"), 401), 3);
  const lo = mean.map((m, i) => m - Math.sqrt(variance[i]));
  const hi = mean.map((m, i) => m + Math.sqrt(variance[i]));
  plot(c, b, [
    { values: mean, color: "#1f5fa8" },
    { values: lo, color: "#9bb7d9", dash: [3, 3] },
    { values: hi, color: "#9bb7d9", dash: [3, 3] },
  ], "B [mT]", "<cos gamma> ± std");
});

bind("interference", (v, c) => {
  const [tau, p] = columns(interferenceCurve(v("l3"), v("aspect"), v("b"), v("rot"), v("t2"), 401), 2);
  plot(c, tau.map((t) => t * 1e6), [{ values: p, color: "#1f5fa8" }], "tau [µs]", "P_up");
});
