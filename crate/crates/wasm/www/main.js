import init, { invariants, psl2, select_classes } from "./pkg/beauville_wasm.js";

const $ = (id) => document.getElementById(id);

function show(target, text) {
  try {
    $(target).textContent = JSON.stringify(JSON.parse(text), null, 2);
  } catch (e) {
    $(target).textContent = String(text);
  }
}

await init();
$("status").textContent = "Ready.";
for (const id of ["inv-go", "psl-go", "sel-go"]) $(id).disabled = false;

$("inv-go").addEventListener("click", () =>
  show("inv-out", invariants($("inv-order").value, $("inv-t1").value, $("inv-t2").value)));

$("psl-go").addEventListener("click", () => {
  const q = Number.parseInt($("psl-q").value, 10);
  if (!Number.isInteger(q) || q < 0) return show("psl-out", '{"error": "q must be a non-negative integer"}');
  $("psl-out").textContent = "Working…";
  setTimeout(() => show("psl-out", psl2(q)), 0);
});

$("sel-go").addEventListener("click", () => {
  const n = Number.parseInt($("sel-n").value, 10);
  if (!Number.isInteger(n) || n < 0) return show("sel-out", '{"error": "n must be a non-negative integer"}');
  show("sel-out", select_classes(n, $("sel-t1").value, $("sel-t2").value, $("sel-sn").checked, $("sel-profile").value));
});
