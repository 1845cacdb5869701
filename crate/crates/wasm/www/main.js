import init, { classical_compare, noisy_pair_diamond, two_step_distribution } from "./pkg/discrim_wasm.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => x.toFixed(6);

function show(id, f) {
  try {
    $(id).textContent = f();
  } catch (e) {
    $(id).textContent = `error: ${e.message ?? e}`;
  }
}

function value(v) {
  return v.exact ? `${fmt(v.value)} (${v.exact})` : fmt(v.value);
}

function compare() {
  show("classical-out", () => {
    const r = JSON.parse(classical_compare($("m0").value, $("m1").value, Number($("uses").value)));
    const lines = [
      `one-shot:     ${value(r.one_shot)} with input ${r.one_shot_input}`,
      `non-adaptive: ${value(r.nonadaptive)} with inputs (${r.nonadaptive_inputs.join(",")})`,
      `adaptive:     ${value(r.adaptive)}`,
    ];
    if (r.two_step_policy) lines.push(`policy:       ${r.two_step_policy}`);
    lines.push(`tree:         ${r.adaptive_tree}`);
    return lines.join("\n");
  });
}

function noise() {
  const p = Number($("noise").value);
  $("noise-value").textContent = p.toFixed(2);
  show("noise-out", () => {
    const r = JSON.parse(noisy_pair_diamond(p));
    return `diamond distance ${fmt(r.value)} (dual bound ${fmt(r.dual_bound)})\nsingle-use success ${fmt(r.success)}`;
  });
}

function protocol() {
  show("protocol-out", () => {
    const r = JSON.parse(two_step_distribution(Number($("theta").value), Number($("phi").value), Number($("purity").value)));
    return `first channel:  (${r.first.map(fmt).join(", ")})\nsecond channel: (${r.second.map(fmt).join(", ")})`;
  });
}

await init();
$("compare").addEventListener("click", compare);
$("noise").addEventListener("input", noise);
for (const id of ["theta", "phi", "purity"]) $(id).addEventListener("input", protocol);
compare();
noise();
protocol();
