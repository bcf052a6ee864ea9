import init, { Demo } from "./pkg/meshless_claw_demo.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");

let demo = null;
let coords = null;
let bounds = null;
let selected = null;
let playing = false;

function num(id) {
  return Number($(id).value);
}

function toPixel(x, y) {
  const [x0, x1, y0, y1] = bounds;
  const s = Math.min(canvas.width / (x1 - x0), canvas.height / (y1 - y0));
  return [(x - x0) * s, canvas.height - (y - y0) * s, s];
}

function fromPixel(px, py) {
  const [x0, x1, y0, y1] = bounds;
  const s = Math.min(canvas.width / (x1 - x0), canvas.height / (y1 - y0));
  return [x0 + px / s, y0 + (canvas.height - py) / s];
}

// blue - white - red
function color(t) {
  t = Math.min(1, Math.max(0, t));
  const a = t < 0.5 ? [40, 90, 200] : [255, 255, 255];
  const b = t < 0.5 ? [255, 255, 255] : [200, 40, 30];
  const f = t < 0.5 ? t * 2 : (t - 0.5) * 2;
  const c = a.map((v, k) => Math.round(v + f * (b[k] - v)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

function field() {
  const show = document.querySelector("input[name=show]:checked").value;
  if (show === "indicator") {
    const ind = demo.indicator();
    return ind.map((v) => Math.log10(v + 1e-12));
  }
  if (show === "ramp") {
    return demo.viscosity_ramp(num("c1"), num("c2"), num("c3"));
  }
  return demo.values();
}

function draw() {
  if (!demo) return;
  const f = field();
  let lo = Infinity, hi = -Infinity;
  for (const v of f) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const span = hi > lo ? hi - lo : 1;
  ctx.fillStyle = "#eee";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const h = num("h");
  for (let i = 0; i < f.length; i++) {
    const [px, py, s] = toPixel(coords[2 * i], coords[2 * i + 1]);
    const r = Math.max(1.5, 0.55 * h * s);
    ctx.fillStyle = color((f[i] - lo) / span);
    ctx.fillRect(px - r, py - r, 2 * r, 2 * r);
  }
  if ($("mark").checked) {
    ctx.fillStyle = "#000";
    for (const i of demo.faults(num("c1"), num("c2"))) {
      const [px, py] = toPixel(coords[2 * i], coords[2 * i + 1]);
      ctx.fillRect(px - 1.5, py - 1.5, 3, 3);
    }
  }
  if (selected !== null) drawStencil();
  $("status").textContent =
    `${demo.len()} nodes   t = ${demo.time().toFixed(4)}   dt = ${demo.dt().toExponential(3)}\n` +
    `range [${lo.toPrecision(6)}, ${hi.toPrecision(6)}]   faults last step: ${demo.last_fault_count()}`;
}

function drawStencil() {
  const h = num("h");
  const st = demo.stencil(selected, num("mu") * h);
  const ids = st.ids(), w = st.w(), v = st.v(), mu = st.mu();
  let rows = `<p>node ${selected}, ${ids.length} neighbours, mu = ${mu.toExponential(3)}` +
    (st.dropped() ? ", <b>sign constraints dropped</b>" : "") + "</p>";
  rows += "<table><tr><th>id</th><th>w</th><th>v</th><th>w - mu v</th></tr>";
  for (let k = 0; k < ids.length; k++) {
    const c = w[k] - mu * v[k];
    const [px, py] = toPixel(coords[2 * ids[k]], coords[2 * ids[k] + 1]);
    ctx.strokeStyle = k === 0 ? "#000" : c < 0 ? "#1f5fbf" : "#b3261e";
    ctx.lineWidth = k === 0 ? 2.5 : 1.5;
    ctx.beginPath();
    ctx.arc(px, py, k === 0 ? 6 : 4, 0, 2 * Math.PI);
    ctx.stroke();
    rows += `<tr><td>${ids[k]}</td><td>${w[k].toExponential(3)}</td><td>${v[k].toExponential(3)}</td>` +
      `<td class="${c < 0 ? "neg" : "pos"}">${c.toExponential(3)}</td></tr>`;
  }
  $("stencil").innerHTML = rows + "</table>";
  st.free();
}

function build() {
  playing = false;
  $("play").textContent = "Play";
  selected = null;
  $("stencil").innerHTML = "";
  try {
    if (demo) demo.free();
    demo = new Demo($("problem").value, $("algorithm").value, $("kind").value, num("h"), num("seed"));
    coords = demo.coords();
    bounds = demo.bounds();
    draw();
  } catch (e) {
    demo = null;
    $("status").textContent = `error: ${e.message ?? e}`;
  }
}

function advance(n) {
  try {
    demo.advance(n);
  } catch (e) {
    playing = false;
    $("status").textContent = `error: ${e.message ?? e}`;
    return;
  }
  draw();
}

function loop() {
  if (!playing || !demo) return;
  advance(Math.max(1, num("rate")));
  requestAnimationFrame(loop);
}

await init();
$("build").onclick = build;
$("step").onclick = () => demo && advance(1);
$("reset").onclick = () => { if (demo) { demo.reset(); draw(); } };
$("play").onclick = () => {
  playing = !playing;
  $("play").textContent = playing ? "Pause" : "Play";
  if (playing) requestAnimationFrame(loop);
};
for (const el of document.querySelectorAll("input[name=show], #mark, #c1, #c2, #c3, #mu")) {
  el.onchange = draw;
}
canvas.onclick = (ev) => {
  if (!demo) return;
  const r = canvas.getBoundingClientRect();
  const [x, y] = fromPixel(ev.clientX - r.left, ev.clientY - r.top);
  selected = demo.nearest(x, y);
  draw();
};
build();
