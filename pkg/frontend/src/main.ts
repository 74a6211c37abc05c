// Browser entry point. All decisions live in the view-models; this file only
// projects their state into the DOM and forwards events back.

import { WorkbenchClient } from "./api.js";
import { ComponentView } from "./component.js";
import { IndividualView } from "./individual.js";

const client = new WorkbenchClient(window.location.origin);
const individual = new IndividualView(client);
const componentView = new ComponentView(client);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`#${id} missing`);
  return node as T;
}

/* ---------------- individual panel ---------------- */

function renderIndividual(): void {
  const paramsBox = byId<HTMLInputElement>("ind-params");
  if (document.activeElement !== paramsBox) paramsBox.value = individual.paramsText;
  byId<HTMLElement>("ind-params-error").textContent = individual.paramsError ?? "";
  byId<HTMLInputElement>("ind-init").checked = individual.params.init;
  byId<HTMLInputElement>("ind-kodkod").checked = individual.params.kodkod;
  byId<HTMLInputElement>("ind-smt").checked = individual.params.smt;

  const goalBox = byId<HTMLTextAreaElement>("ind-goal");
  if (document.activeElement !== goalBox) goalBox.value = individual.goalText;

  const hyps = byId<HTMLElement>("ind-hyps");
  hyps.replaceChildren();
  individual.hypotheses.forEach((h, i) => {
    const row = el("div", "hyp-row");
    const btn = el("button", "small", "copy to goal");
    btn.addEventListener("click", () => {
      individual.copyHypothesisToGoal(i);
      renderIndividual();
    });
    row.append(el("code", "", h), btn);
    hyps.append(row);
  });

  byId<HTMLButtonElement>("ind-eval").disabled = !individual.canEval();
  byId<HTMLButtonElement>("ind-cancel").disabled = !individual.inFlight;
  byId<HTMLButtonElement>("ind-add-rule-now").hidden = !individual.canOfferRule();

  const out = byId<HTMLElement>("ind-result");
  out.replaceChildren();
  if (individual.inFlight) {
    out.append(el("span", "badge unknown", "evaluating..."));
  } else if (individual.lastFailure) {
    const f = individual.lastFailure;
    const msg =
      f.kind === "parse"
        ? `parse error in ${f.where} at line ${f.line}, col ${f.col}: ${f.message}`
        : f.kind === "cancelled"
          ? "cancelled"
          : f.message;
    out.append(el("span", "badge false", msg));
  } else if (individual.lastResult) {
    const r = individual.lastResult;
    const badge = el("span", `badge ${r.verdict.toLowerCase()}`, r.verdict);
    out.append(badge);
    if (r.reason) out.append(el("span", "", ` (${r.reason})`));
    out.append(el("span", "muted", ` ${r.elapsed_ms} ms`));
    if (r.counterexample) {
      const ce = Object.entries(r.counterexample)
        .map(([k, v]) => `${k} = ${v}`)
        .join(", ");
      out.append(el("div", "ce", `counterexample: ${ce}`));
    }
    if (r.rule) {
      out.append(
        el(
          "div",
          "muted",
          r.rule.added
            ? `rule ${r.rule.theory_name} -> ${r.rule.file}`
            : (r.rule.message ?? "rule not added"),
        ),
      );
    }
  }
}

function wireIndividual(): void {
  byId<HTMLInputElement>("ind-params").addEventListener("input", (e) => {
    individual.setParamsText((e.target as HTMLInputElement).value);
    renderIndividual();
  });
  byId<HTMLInputElement>("ind-init").addEventListener("change", (e) => {
    individual.setInit((e.target as HTMLInputElement).checked);
    renderIndividual();
  });
  byId<HTMLInputElement>("ind-kodkod").addEventListener("change", (e) => {
    individual.setKodkod((e.target as HTMLInputElement).checked);
    renderIndividual();
  });
  byId<HTMLInputElement>("ind-smt").addEventListener("change", (e) => {
    individual.setSmt((e.target as HTMLInputElement).checked);
    renderIndividual();
  });
  byId<HTMLTextAreaElement>("ind-goal").addEventListener("input", (e) => {
    individual.setGoalText((e.target as HTMLTextAreaElement).value);
    renderIndividual();
  });
  byId<HTMLInputElement>("ind-addrule").addEventListener("change", (e) => {
    individual.addRule = (e.target as HTMLInputElement).checked;
  });
  byId<HTMLInputElement>("ind-wd").addEventListener("change", (e) => {
    individual.wdPo = (e.target as HTMLInputElement).checked;
  });
  byId<HTMLButtonElement>("ind-eval").addEventListener("click", async () => {
    renderIndividual();
    await individual.evaluate();
    renderIndividual();
  });
  byId<HTMLButtonElement>("ind-cancel").addEventListener("click", () => {
    individual.cancel();
  });
  byId<HTMLButtonElement>("ind-add-rule-now").addEventListener("click", async () => {
    await individual.addRuleFromLastResult();
    renderIndividual();
  });
}

/* ---------------- component panel ---------------- */

function renderComponent(): void {
  const paramsBox = byId<HTMLInputElement>("cmp-params");
  if (document.activeElement !== paramsBox) paramsBox.value = componentView.paramsText;
  byId<HTMLElement>("cmp-params-error").textContent = componentView.paramsError ?? "";
  byId<HTMLInputElement>("cmp-init").checked = componentView.params.init;
  byId<HTMLInputElement>("cmp-kodkod").checked = componentView.params.kodkod;
  byId<HTMLInputElement>("cmp-smt").checked = componentView.params.smt;

  const tbody = byId<HTMLElement>("cmp-rows");
  tbody.replaceChildren();
  for (const row of componentView.rows) {
    const tr = el("tr");
    const selTd = el("td");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = row.selected;
    box.disabled = componentView.running;
    box.addEventListener("change", () => {
      componentView.toggleSelected(row.name);
      renderComponent();
    });
    selTd.append(box);
    const load = el("button", "small", "open");
    load.addEventListener("click", async () => {
      if (componentView.component === null) return;
      await individual.loadPo(componentView.component, row.name);
      showTab("individual");
    });
    const nameTd = el("td");
    nameTd.append(el("code", "", row.name), load);
    tr.append(
      selTd,
      nameTd,
      el("td", "", row.group),
      el("td", "", row.status + (row.provenance ? ` (${row.provenance})` : "")),
      el("td", "", row.verdict ?? row.note),
    );
    tbody.append(tr);
  }

  byId<HTMLButtonElement>("cmp-run").disabled = !componentView.canRun();
  byId<HTMLButtonElement>("cmp-cancel").disabled = !componentView.running;
  byId<HTMLButtonElement>("cmp-pipeline").disabled = componentView.running;
  byId<HTMLButtonElement>("cmp-refresh").disabled = componentView.running;

  byId<HTMLTextAreaElement>("cmp-log").value = componentView.resultLog.join("\n");
}

function wireComponent(): void {
  byId<HTMLInputElement>("cmp-params").addEventListener("input", (e) => {
    componentView.setParamsText((e.target as HTMLInputElement).value);
    renderComponent();
  });
  byId<HTMLInputElement>("cmp-init").addEventListener("change", (e) => {
    componentView.setInit((e.target as HTMLInputElement).checked);
    renderComponent();
  });
  byId<HTMLInputElement>("cmp-kodkod").addEventListener("change", (e) => {
    componentView.setKodkod((e.target as HTMLInputElement).checked);
    renderComponent();
  });
  byId<HTMLInputElement>("cmp-smt").addEventListener("change", (e) => {
    componentView.setSmt((e.target as HTMLInputElement).checked);
    renderComponent();
  });
  byId<HTMLInputElement>("cmp-addrule").addEventListener("change", (e) => {
    componentView.addRule = (e.target as HTMLInputElement).checked;
  });
  byId<HTMLSelectElement>("cmp-select").addEventListener("change", async (e) => {
    const name = (e.target as HTMLSelectElement).value;
    if (name) {
      await componentView.load(name);
      renderComponent();
    }
  });
  byId<HTMLButtonElement>("cmp-run").addEventListener("click", async () => {
    const tick = setInterval(renderComponent, 120);
    try {
      await componentView.runSelected();
    } finally {
      clearInterval(tick);
      renderComponent();
    }
  });
  byId<HTMLButtonElement>("cmp-cancel").addEventListener("click", () => {
    componentView.cancel();
  });
  byId<HTMLButtonElement>("cmp-pipeline").addEventListener("click", async () => {
    const emit = byId<HTMLInputElement>("cmp-emit").checked;
    await componentView.runPipeline(emit);
    renderComponent();
  });
  byId<HTMLButtonElement>("cmp-refresh").addEventListener("click", async () => {
    await componentView.refresh();
    renderComponent();
  });
}

/* ---------------- shell ---------------- */

function showTab(which: "individual" | "component"): void {
  byId<HTMLElement>("panel-individual").hidden = which !== "individual";
  byId<HTMLElement>("panel-component").hidden = which !== "component";
  byId<HTMLElement>("tab-individual").classList.toggle("active", which === "individual");
  byId<HTMLElement>("tab-component").classList.toggle("active", which === "component");
  renderIndividual();
  renderComponent();
}

async function boot(): Promise<void> {
  wireIndividual();
  wireComponent();
  byId<HTMLElement>("tab-individual").addEventListener("click", () => showTab("individual"));
  byId<HTMLElement>("tab-component").addEventListener("click", () => showTab("component"));

  const select = byId<HTMLSelectElement>("cmp-select");
  try {
    const components = await client.components();
    select.replaceChildren(el("option", "", "")); // blank until the user picks
    for (const c of components) {
      const opt = el("option", "", `${c.name} (${c.unproved_count}/${c.po_count} unproved)`);
      opt.value = c.name;
      select.append(opt);
    }
  } catch (e) {
    byId<HTMLElement>("cmp-params-error").textContent =
      `cannot reach the API: ${(e as Error).message}`;
  }
  showTab("component");
}

boot();
