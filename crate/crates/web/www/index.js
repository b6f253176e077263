import init, { arrow, classNames, enumerate, orderTypes } from "./pkg/rwb_web.js";

const $ = (id) => document.getElementById(id);

function show(out, run) {
  out.classList.remove("err");
  try {
    out.textContent = JSON.stringify(JSON.parse(run()), null, 2);
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function arrowSummary(json) {
  const v = JSON.parse(json);
  const head = v.holds ? "holds" : "fails; bad coloring of copies of A:";
  const lines = v.holds ? [] : v.coloring.assignments.map((a) => `  [${a.image}] -> ${a.color}`);
  return JSON.stringify({ verdict: [head, ...lines].join("\n"), stats: v.stats });
}

await init();

for (const name of JSON.parse(classNames())) {
  $("class").add(new Option(name, name));
}
const cls = () => $("class").value;

$("enum-go").onclick = () => show($("enum-out"), () => enumerate(cls(), Number($("enum-n").value)));
$("arrow-go").onclick = () =>
  show($("arrow-out"), () =>
    arrowSummary(arrow(cls(), $("arrow-a").value, $("arrow-b").value, $("arrow-c").value, Number($("arrow-k").value))));
$("order-go").onclick = () => show($("order-out"), () => orderTypes(cls(), Number($("order-n").value)));
