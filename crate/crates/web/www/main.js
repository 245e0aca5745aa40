import init, { branchDiagram, analysisReport, obstructionCurve } from "./pkg/yamabif_web.js";

const $ = (id) => document.getElementById(id);
const inputs = () => [$("f0").value, $("f1").value, $("lo").value, $("hi").value];

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = String(e);
    }
  };
}

// Log-x axes: the interesting structure of A + B/λ spans decades of λ.
function frame(canvas, xs, ymin, ymax) {
  const ctx = canvas.getContext("2d");
  const pad = 40;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const lx0 = Math.log(xs[0]);
  const lx1 = Math.log(xs[xs.length - 1]);
  const px = (x) => pad + ((Math.log(x) - lx0) / (lx1 - lx0)) * w;
  const py = (y) => pad + (1 - (y - ymin) / (ymax - ymin)) * h;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  for (let d = Math.ceil(lx0 / Math.LN10); d <= lx1 / Math.LN10; d++) {
    const x = px(10 ** d);
    ctx.fillText(`1e${d}`, x - 10, canvas.height - pad + 14);
    ctx.beginPath();
    ctx.moveTo(x, pad + h);
    ctx.lineTo(x, pad + h + 4);
    ctx.stroke();
  }
  ctx.fillText(ymax.toPrecision(3), 2, pad + 4);
  ctx.fillText(ymin.toPrecision(3), 2, pad + h);
  return { ctx, px, py, pad, w, h };
}

function drawBranches() {
  const [f0, f1, lo, hi] = inputs();
  const cap = Number($("cap").value) || 4;
  const d = JSON.parse(branchDiagram(f0, f1, lo, hi, 300, cap));
  // Clip the vertical range around zero so the crossings stay visible.
  let span = 1;
  for (const b of d.branches) for (const s of b.sigma) span = Math.max(span, Math.min(Math.abs(s), 40));
  const { ctx, px, py, pad, h } = frame($("branches"), d.lambdas, -span, span);

  ctx.strokeStyle = "#000";
  ctx.beginPath();
  ctx.moveTo(px(d.lambdas[0]), py(0));
  ctx.lineTo(px(d.lambdas[d.lambdas.length - 1]), py(0));
  ctx.stroke();

  d.branches.forEach((b, k) => {
    ctx.strokeStyle = `hsl(${(k * 47) % 360} 60% 45%)`;
    ctx.beginPath();
    b.sigma.forEach((s, n) => {
      const y = py(Math.max(-span, Math.min(span, s)));
      if (n === 0) ctx.moveTo(px(d.lambdas[n]), y);
      else ctx.lineTo(px(d.lambdas[n]), y);
    });
    ctx.stroke();
  });

  for (const inst of d.instants) {
    ctx.fillStyle = inst.classification === "NeutralUndetermined" ? "#888" : "#c00";
    ctx.fillRect(px(inst.value) - 1, pad, 2, h);
  }

  const rows = d.instants
    .map((i) => `<tr><td>${i.lambda}</td><td>${i.value.toPrecision(6)}</td><td>${i.delta_n}</td>` +
      `<td>${i.classification}</td><td>${i.contributors.map(([a, b]) => `(${a},${b})`).join(" ")}</td></tr>`)
    .join("");
  $("instants").innerHTML =
    `<tr><th>λ</th><th>≈</th><th>index jump</th><th>verdict</th><th>vanishing branches</th></tr>${rows}` +
    `<tr><td colspan="5" class="muted">listed eigenvalues: ${d.counts[0]} and ${d.counts[1]}</td></tr>`;
}

function drawObstruction() {
  const [f0, f1, lo, hi] = inputs();
  const d = JSON.parse(obstructionCurve(f0, f1, lo, hi, 300));
  const top = Math.max(...d.normalized_scalar.filter(Number.isFinite), d.sphere_yamabe) * 1.05;
  const bottom = Math.min(0, ...d.normalized_scalar.filter(Number.isFinite));
  const { ctx, px, py } = frame($("obstruction"), d.lambdas, bottom, top);

  ctx.strokeStyle = "#888";
  ctx.setLineDash([5, 4]);
  ctx.beginPath();
  ctx.moveTo(px(d.lambdas[0]), py(d.sphere_yamabe));
  ctx.lineTo(px(d.lambdas[d.lambdas.length - 1]), py(d.sphere_yamabe));
  ctx.stroke();
  ctx.setLineDash([]);

  for (let n = 1; n < d.lambdas.length; n++) {
    ctx.strokeStyle = d.certified[n] ? "#c00" : "#06c";
    ctx.beginPath();
    ctx.moveTo(px(d.lambdas[n - 1]), py(d.normalized_scalar[n - 1]));
    ctx.lineTo(px(d.lambdas[n]), py(d.normalized_scalar[n]));
    ctx.stroke();
  }
}

function runAnalysis() {
  const [f0, f1, lo, hi] = inputs();
  $("report").textContent = analysisReport(f0, f1, lo, hi);
}

await init();
$("draw").onclick = guarded(drawBranches);
$("obstruct").onclick = guarded(drawObstruction);
$("analyze").onclick = guarded(runAnalysis);
guarded(drawBranches)();
