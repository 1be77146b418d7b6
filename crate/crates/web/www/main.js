import init, { spectrum_json, evolve_json, resources_json } from "./pkg/qu8it_web.js";

const $ = (id) => document.getElementById(id);

function model() {
  return {
    nf: Number($("nf").value),
    L: Number($("L").value),
    mass: Number($("mass").value),
    g: Number($("g").value),
    h: Number($("h").value),
  };
}

function call(fn, request) {
  $("error").textContent = "";
  try {
    return JSON.parse(fn(JSON.stringify(request)));
  } catch (e) {
    $("error").textContent = String(e);
    return null;
  }
}

function fmt(x, digits = 6) {
  return x === null || x === undefined ? "" : Number(x).toPrecision(digits);
}

function fillTable(table, header, rows) {
  table.replaceChildren();
  const head = table.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = table.insertRow();
    for (const cell of r) tr.insertCell().textContent = cell;
  }
}

// Line plot of several series sharing an x axis.
function plot(canvas, xs, series, yLabel) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const ys = series.flatMap((s) => s.values).filter(Number.isFinite);
  let lo = Math.min(...ys), hi = Math.max(...ys);
  if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
  const x0 = xs[0], x1 = xs[xs.length - 1] || 1;
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad + ((lo - y) / (hi - lo)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText(fmt(hi, 4), 2, pad + 4);
  ctx.fillText(fmt(lo, 4), 2, h - pad);
  ctx.fillText(yLabel, pad, pad - 8);
  series.forEach((s, k) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.values.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.name, w - pad - 140, pad + 16 + 14 * k);
  });
}

// Energy levels as horizontal ticks, coloured by whether they are singlets.
function plotLevels(canvas, levels) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  ctx.clearRect(0, 0, w, h);
  const es = levels.map((l) => l.energy);
  let lo = Math.min(...es), hi = Math.max(...es);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const py = (e) => h - pad - ((e - lo) / (hi - lo)) * (h - 2 * pad);
  ctx.font = "12px system-ui";
  ctx.fillStyle = "#444";
  ctx.fillText(fmt(hi, 4), 2, pad);
  ctx.fillText(fmt(lo, 4), 2, h - pad);
  for (const l of levels) {
    ctx.strokeStyle = Math.abs(l.casimir) < 1e-6 ? "#1565c0" : "#e0a030";
    ctx.beginPath();
    ctx.moveTo(w / 2 - 120, py(l.energy));
    ctx.lineTo(w / 2 + 120, py(l.energy));
    ctx.stroke();
  }
  ctx.fillStyle = "#1565c0";
  ctx.fillText("colour singlet", w - 130, pad);
  ctx.fillStyle = "#e0a030";
  ctx.fillText("non-singlet", w - 130, pad + 14);
}

function runSpectrum() {
  const req = model();
  const sector = $("sector").value.trim();
  if (sector && sector !== "all") req.sector = sector;
  const res = call(spectrum_json, req);
  if (!res) return;
  plotLevels($("spectrum-plot"), res.levels);
  fillTable(
    $("spectrum-table"),
    ["#", "B", "energy", "Casimir"],
    res.levels.slice(0, 40).map((l, i) => [i, l.sector, fmt(l.energy, 8), fmt(l.casimir, 3)]),
  );
}

function runEvolve() {
  const req = {
    ...model(),
    t: Number($("t").value),
    steps: Number($("steps").value),
    order: Number($("order").value),
  };
  const state = $("state").value.trim();
  if (state) req.state = state;
  const res = call(evolve_json, req);
  if (!res) return;
  const ts = res.trotter.map((r) => r.t);
  plot($("evolve-plot"), ts, [
    { name: "Casimir (Trotter)", color: "#c62828", values: res.trotter.map((r) => r.casimir) },
    { name: "electric (exact)", color: "#1565c0", values: res.exact.map((r) => r.electric) },
    { name: "electric (Trotter)", color: "#2e7d32", values: res.trotter.map((r) => r.electric) },
  ], "observables");
  const last = res.trotter[res.trotter.length - 1];
  $("evolve-summary").textContent =
    `${res.state}: fidelity ${fmt(last.fidelity, 10)} at t = ${fmt(last.t, 4)}, ` +
    `Casimir ${fmt(last.casimir, 3)}, baryon ${fmt(last.baryon, 6)}`;
}

function runResources() {
  const res = call(resources_json, model());
  if (!res) return;
  const row = (name, r) => [
    name, r.qudit_count, r.kinetic_entangling, r.electric_entangling, r.h_entangling ?? "",
  ];
  fillTable(
    $("resources-table"),
    ["encoding", "qudits", "kinetic", "electric", "h"],
    [
      row("qubit", res.qubit),
      row("qu8it", res.qu8it),
      ["ratio", ...res.ratios.map((x) => fmt(x, 4)), ""],
    ],
  );
}

await init();
$("run-spectrum").addEventListener("click", runSpectrum);
$("run-evolve").addEventListener("click", runEvolve);
$("run-resources").addEventListener("click", runResources);
runSpectrum();
runResources();
