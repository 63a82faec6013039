import init, { checkPair, relatePair, explore, traceClass } from "./pkg/mtp_web.js";

const $ = (id) => document.getElementById(id);
const defs = () => $("defs").value;

function show(target, fn) {
  try {
    target.replaceChildren(...fn());
  } catch (e) {
    const p = document.createElement("p");
    p.className = "error";
    p.textContent = String(e);
    target.replaceChildren(p);
  }
}

function text(s, cls) {
  const p = document.createElement("div");
  if (cls) p.className = cls;
  p.textContent = s;
  return p;
}

const trace = (t) => (t.length ? t.join(" ") : "eps");
const set = (xs) => `{${xs.join(", ")}}`;

function reportLines(r) {
  const out = [text(`${r.relation}: ${r.verdict}`, r.verdict)];
  if (r.witness) {
    const w = r.witness;
    out.push(text(`  trace ${trace(w.trace)}, must set ${set(w.mustSet)}${w.part ? " in part " + set(w.part) : ""}`));
    out.push(text(`  class ${w.classMembers.map(trace).join(", ")}`));
  }
  if (r.observer) out.push(text(`  observer ${r.observer}`));
  else if (r.synthesis === "unavailable") out.push(text("  no candidate observer passed the must oracle"));
  if (r.error) out.push(text(`  ${r.error}`, "error"));
  return out;
}

$("check").onclick = () =>
  show($("compare-out"), () =>
    reportLines(JSON.parse(checkPair($("relation").value, $("lhs").value, $("rhs").value, $("iface").value, defs()))));

$("relate").onclick = () =>
  show($("compare-out"), () => {
    const m = JSON.parse(relatePair($("lhs").value, $("rhs").value, $("iface").value, defs()));
    const table = document.createElement("table");
    table.innerHTML = "<tr><th>relation</th><th>left ≤ right</th><th>right ≤ left</th></tr>";
    for (let i = 0; i < 6; i += 2) {
      const row = table.insertRow();
      row.insertCell().textContent = m.results[i].relation;
      for (const r of [m.results[i], m.results[i + 1]]) {
        const cell = row.insertCell();
        cell.className = r.verdict;
        cell.textContent = r.witness ? `${r.verdict}: ${trace(r.witness.trace)} / ${set(r.witness.mustSet)}` : r.verdict;
        if (r.observer) cell.title = `observer ${r.observer}`;
      }
    }
    const c = m.consistency;
    return [table, text(`must implies unc: ${c.mustImpliesUnc}; unc implies ind: ${c.uncImpliesInd}`)];
  });

$("explore").onclick = () =>
  show($("explore-out"), () => {
    const r = JSON.parse(explore($("term").value, defs()));
    const lines = r.lts.nodes.map((n, i) => `${i}: ${n}`);
    lines.push("");
    for (const e of r.lts.edges) lines.push(`${e.source} --${e.label}--> ${e.target}`);
    lines.push("", r.traces ? `traces: ${r.traces.join(", ")}` : "infinitely many traces");
    return [text(lines.join("\n"))];
  });

$("classes").onclick = () =>
  show($("classes-out"), () => {
    const part = Number.parseInt($("part").value, 10);
    const members = JSON.parse(traceClass($("trace").value, $("class-iface").value, Number.isNaN(part) ? -1 : part, $("among").value, defs()));
    return [text(`[${members.join(", ")}]`)];
  });

init().then(
  () => { $("status").textContent = "ready"; },
  (e) => { $("status").textContent = `failed to load the WebAssembly module: ${e}`; },
);
