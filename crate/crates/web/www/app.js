import init, { fixtures, evaluate, closure, orbits } from "./pkg/halmos_web.js";

const $ = (id) => document.getElementById(id);
const palette = ["#3a6", "#c63", "#36c", "#a3a", "#aa3", "#3aa", "#666", "#c36"];

function source() {
  return $("source").value;
}

function call(f, ...args) {
  $("status").textContent = "";
  try {
    return JSON.parse(f(...args));
  } catch (e) {
    $("status").textContent = String(e);
    return null;
  }
}

// color: member index list -> css color, for one or two variables
function grid(view, colorOf) {
  const n = view.carrier.length;
  const table = document.createElement("table");
  table.className = "grid";
  if (view.vars.length === 0) {
    table.innerHTML = `<tr><td style="background:${colorOf([]) || ""}">()</td></tr>`;
    return table;
  }
  const two = view.vars.length === 2;
  const head = document.createElement("tr");
  head.innerHTML = `<th>${two ? view.vars[1] + "\\" + view.vars[0] : view.vars[0]}</th>` +
    view.carrier.map((c) => `<th>${c}</th>`).join("");
  table.appendChild(head);
  for (let r = 0; r < (two ? n : 1); r++) {
    const row = document.createElement("tr");
    row.innerHTML = `<th>${two ? view.carrier[r] : ""}</th>`;
    for (let c = 0; c < n; c++) {
      const td = document.createElement("td");
      const color = colorOf(two ? [c, r] : [c]);
      if (color) {
        td.style.background = color;
      }
      row.appendChild(td);
    }
    table.appendChild(row);
  }
  return table;
}

function key(values) {
  return values.join(",");
}

function showList(view) {
  const pre = document.createElement("pre");
  pre.textContent = `card: ${view.card}\n` + view.labels.join("\n");
  return pre;
}

function show(nodes) {
  const out = $("output");
  out.replaceChildren(...nodes);
}

function drawable(view) {
  return view.vars.length <= 2;
}

function onEval() {
  const r = call(evaluate, source(), $("vars").value, $("formula").value);
  if (!r) return;
  const members = new Set(r.set.members.map(key));
  const nodes = [showList(r.set)];
  if (drawable(r.set)) {
    nodes.unshift(grid(r.set, (v) => (members.has(key(v)) ? palette[0] : null)));
  }
  const p = document.createElement("p");
  p.textContent = `in_theory: ${r.in_theory}`;
  nodes.push(p);
  show(nodes);
}

function onClosure() {
  const r = call(closure, source(), $("vars").value, $("points").value, $("kind").value);
  if (!r) return;
  const seeds = new Set(r.input.members.map(key));
  const members = new Set(r.closure.members.map(key));
  const nodes = [showList(r.closure)];
  if (drawable(r.closure)) {
    nodes.unshift(grid(r.closure, (v) => (seeds.has(key(v)) ? "#236" : members.has(key(v)) ? palette[0] : null)));
  }
  const p = document.createElement("p");
  p.textContent = `definable: ${r.definable}` + (r.approximate ? " (approximate closure)" : "");
  nodes.push(p);
  show(nodes);
}

function onOrbits() {
  const r = call(orbits, source(), $("vars").value);
  if (!r) return;
  const owner = new Map();
  r.orbits.forEach((o, i) => o.members.forEach((m) => owner.set(key(m), i)));
  const nodes = [];
  if (r.orbits.length && drawable(r.orbits[0])) {
    nodes.push(grid(r.orbits[0], (v) => palette[owner.get(key(v)) % palette.length]));
  }
  const pre = document.createElement("pre");
  pre.textContent = `count: ${r.count}\n` + r.orbits.map((o) => "{" + o.labels.join("; ") + "}").join("\n");
  nodes.push(pre);
  show(nodes);
}

async function main() {
  await init();
  const list = call(fixtures) || [];
  for (const f of list) {
    const opt = document.createElement("option");
    opt.value = f.source;
    opt.textContent = f.name;
    $("fixture").appendChild(opt);
  }
  $("fixture").addEventListener("change", () => {
    $("source").value = $("fixture").value;
  });
  const z3 = list.find((f) => f.name === "Z3");
  if (z3) {
    $("fixture").value = z3.source;
    $("source").value = z3.source;
  }
  $("run-eval").addEventListener("click", onEval);
  $("run-closure").addEventListener("click", onClosure);
  $("run-orbits").addEventListener("click", onOrbits);
}

main();
