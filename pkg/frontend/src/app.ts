// What-if console controller: one reading form, three result panels.
// All numbers on screen come from service responses or the form itself.

import { ApiError, PanelRequest, type ApiClient } from "./api";
import {
  checkReading,
  deltasAgainstQuery,
  drawSessionSeed,
  methodAvailable,
  rankCrops,
} from "./state";
import type {
  CounterfactualResponse,
  ExplainMethod,
  ExplainResponse,
  ModelInfo,
  PredictionResponse,
} from "./types";
import { isLimePayload } from "./types";
import { banner, clear, el, probabilityBar, signedBars } from "./ui";

const METHODS: ExplainMethod[] = [
  "shap-exact",
  "shap-kernel",
  "path",
  "gain",
  "permutation",
  "lime",
];

interface WhatIfState {
  info: ModelInfo;
  seed: number;
  query: number[] | null;
  prediction: PredictionResponse | null;
  explanation: ExplainResponse | null;
  cfResult: CounterfactualResponse | null;
}

export async function createApp(root: HTMLElement, client: ApiClient): Promise<void> {
  const info = await client.model();
  const state: WhatIfState = {
    info,
    seed: drawSessionSeed(),
    query: null,
    prediction: null,
    explanation: null,
    cfResult: null,
  };
  const requests = {
    predict: new PanelRequest(),
    explain: new PanelRequest(),
    counterfactual: new PanelRequest(),
  };

  clear(root);
  root.append(
    el("header", {}, [
      el("h1", { text: "crop what-if console" }),
      el("p", {
        id: "model-line",
        text:
          `model: ${info.kind} over ${info.classes.length} crops · ` +
          `artifact ${info.artifact_hash.slice(0, 12)} · session seed `,
      }),
    ]),
  );
  const seedInput = el("input", {
    id: "seed-input",
    type: "number",
    value: String(state.seed),
  });
  seedInput.addEventListener("change", () => {
    const v = Number(seedInput.value);
    if (Number.isFinite(v)) state.seed = Math.trunc(v);
  });
  root.querySelector("#model-line")!.append(seedInput);

  // ---- reading form ------------------------------------------------------
  const form = el("form", { id: "reading-form" });
  const inputs: HTMLInputElement[] = [];
  info.schema.names.forEach((name, i) => {
    const range = info.feature_ranges[name];
    const hint = range ? `${range[0].toFixed(1)} – ${range[1].toFixed(1)}` : "";
    const input = el("input", {
      "data-feature": name,
      name,
      inputmode: "decimal",
      placeholder: hint,
      autocomplete: "off",
    });
    inputs.push(input);
    form.append(
      el("label", { class: "field" }, [
        el("span", { class: "field-name", text: `${name} (${info.schema.units[i]})` }),
        input,
        el("span", { class: "field-problem", "data-problem": name }),
      ]),
    );
  });
  const submit = el("button", { id: "predict-btn", type: "submit", text: "recommend a crop" });
  submit.disabled = true;
  form.append(submit);
  root.append(form);

  const predictionPanel = el("section", { id: "prediction-panel" });
  const explainPanel = el("section", { id: "explain-panel" });
  const cfPanel = el("section", { id: "cf-panel" });
  root.append(predictionPanel, explainPanel, cfPanel);

  function readForm() {
    return checkReading(info.schema.names, inputs.map((inp) => inp.value));
  }

  function refreshFormValidity(): void {
    const { values, problems } = readForm();
    problems.forEach((problem, i) => {
      const slot = form.querySelector(`[data-problem="${info.schema.names[i]}"]`)!;
      slot.textContent = problem && inputs[i].value !== "" ? problem : "";
    });
    submit.disabled = values === null;
    if (values !== null) {
      state.query = values;
      renderCounterfactuals(); // delta bars track the live query
    }
  }
  form.addEventListener("input", refreshFormValidity);

  // ---- prediction panel --------------------------------------------------
  function renderPrediction(error?: string): void {
    clear(predictionPanel);
    predictionPanel.append(el("h2", { text: "recommendation" }));
    if (error) {
      predictionPanel.append(banner(error));
      return;
    }
    if (!state.prediction) {
      predictionPanel.append(el("p", { class: "hint", text: "enter a reading and submit" }));
      return;
    }
    const ranked = rankCrops(state.prediction, 3);
    predictionPanel.append(
      el("p", { id: "top-crop", text: ranked[0].crop }),
      ...ranked.map((r) => probabilityBar(r.crop, r.probability)),
    );
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const { values } = readForm();
    if (values === null) return;
    state.query = values;
    void requests.predict
      .run((signal) => client.predict(values, signal))
      .then((prediction) => {
        if (!prediction) return; // superseded by a newer submission
        state.prediction = prediction;
        renderPrediction();
        renderExplainControls();
        renderCfControls();
      })
      .catch((err) => renderPrediction(describe(err)));
  });

  // ---- explanation panel -------------------------------------------------
  const methodSelect = el("select", { id: "method-select" });
  const explainTarget = el("select", { id: "explain-target" });
  const explainButton = el("button", { id: "explain-btn", text: "explain" });
  const explainResult = el("div", { id: "explain-result" });

  function renderExplainControls(): void {
    clear(explainPanel);
    explainPanel.append(el("h2", { text: "why this crop?" }));
    if (!state.prediction) {
      explainPanel.append(el("p", { class: "hint", text: "predict first" }));
      return;
    }
    clear(methodSelect);
    for (const method of METHODS) {
      const option = el("option", { value: method, text: method });
      if (!methodAvailable(method, info.kind)) {
        option.disabled = true;
        option.title = `${method} needs a tree-based model (this service runs ${info.kind})`;
      }
      methodSelect.append(option);
    }
    clear(explainTarget);
    for (const crop of info.classes) {
      const option = el("option", { value: crop, text: crop });
      if (crop === state.prediction.predicted_crop) option.selected = true;
      explainTarget.append(option);
    }
    explainPanel.append(
      el("div", { class: "controls" }, [methodSelect, explainTarget, explainButton]),
      explainResult,
    );
    renderExplanation();
  }

  function renderExplanation(error?: string): void {
    clear(explainResult);
    if (error) {
      explainResult.append(banner(error));
      return;
    }
    const explanation = state.explanation;
    if (!explanation) return;
    if (isLimePayload(explanation)) {
      const list = el("ul", { id: "rule-list" });
      for (const rule of explanation.rules) {
        list.append(
          el("li", { class: rule.weight >= 0 ? "pos" : "neg" }, [
            el("code", { text: rule.condition }),
            el("span", { text: ` ${rule.weight >= 0 ? "+" : ""}${rule.weight.toFixed(4)}` }),
          ]),
        );
      }
      explainResult.append(
        el("p", {
          text:
            `surrogate for ${explanation.target_class}, fidelity ` +
            (explanation.fidelity === null ? "n/a" : explanation.fidelity.toFixed(3)),
        }),
        list,
      );
      return;
    }
    explainResult.append(
      signedBars(explanation.feature_names, explanation.contributions),
    );
    if (explanation.baseline !== null && state.prediction && explanation.target_class) {
      // reconstruct the score client-side so the chart is checkable at a glance
      const sum = explanation.contributions.reduce((a, b) => a + b, 0);
      const reconstructed = explanation.baseline + sum;
      const target = explanation.target_class;
      const idx = state.prediction.classes.indexOf(target);
      const parts = [
        `baseline ${explanation.baseline.toFixed(4)}`,
        `+ contributions ${sum.toFixed(4)}`,
        `= ${reconstructed.toFixed(4)}`,
      ];
      if (idx >= 0 && explanation.metadata["space"] !== "margin") {
        parts.push(`(model probability ${state.prediction.probabilities[idx].toFixed(4)})`);
      }
      explainResult.append(
        el("p", {
          id: "reconstruction",
          "data-total": String(reconstructed),
          text: parts.join(" "),
        }),
      );
    }
  }

  explainButton.addEventListener("click", () => {
    if (!state.query) return;
    const method = methodSelect.value as ExplainMethod;
    const target = explainTarget.value || undefined;
    void requests.explain
      .run((signal) => client.explain(state.query!, method, target, state.seed, signal))
      .then((explanation) => {
        if (!explanation) return;
        state.explanation = explanation;
        renderExplanation();
      })
      .catch((err) => renderExplanation(describe(err)));
  });

  // ---- counterfactual panel ----------------------------------------------
  const cfTarget = el("select", { id: "cf-target" });
  const cfButton = el("button", { id: "cf-btn", text: "find alternatives" });
  const cfResult = el("div", { id: "cf-result" });
  const immutableBoxes = new Map<string, HTMLInputElement>();

  function renderCfControls(): void {
    clear(cfPanel);
    cfPanel.append(el("h2", { text: "grow something else?" }));
    if (!state.prediction) {
      cfPanel.append(el("p", { class: "hint", text: "predict first" }));
      return;
    }
    clear(cfTarget);
    for (const crop of info.classes) {
      if (crop === state.prediction.predicted_crop) continue;
      cfTarget.append(el("option", { value: crop, text: crop }));
    }
    const toggles = el("div", { class: "immutable-toggles" });
    for (const name of info.schema.names) {
      let box = immutableBoxes.get(name);
      if (!box) {
        box = el("input", { type: "checkbox", "data-immutable": name });
        box.checked = name === "temperature" || name === "ph";
        immutableBoxes.set(name, box);
      }
      toggles.append(el("label", { class: "toggle" }, [box, ` ${name} fixed`]));
    }
    cfPanel.append(
      el("div", { class: "controls" }, [cfTarget, cfButton]),
      toggles,
      cfResult,
    );
    renderCounterfactuals();
  }

  function renderCounterfactuals(error?: string): void {
    if (!cfResult.isConnected) return;
    clear(cfResult);
    if (error) {
      cfResult.append(banner(error));
      return;
    }
    const result = state.cfResult;
    if (!result) return;
    if (result.status === "not_found" || result.counterfactuals.length === 0) {
      cfResult.append(
        el("p", {
          id: "cf-not-found",
          text: "no feasible change found for this crop",
        }),
      );
      return;
    }
    const query = state.query ?? result.query;
    result.counterfactuals.forEach((cf, index) => {
      const rows = deltasAgainstQuery(info.schema.names, query, cf);
      const card = el("div", { class: "cf-card", "data-cf": String(index) });
      card.append(
        el("p", { text: `${cf.predicted_class} · ${cf.n_changed} change(s)` }),
        rows.length
          ? signedBars(rows.map((r) => r.feature), rows.map((r) => r.delta),
                       (v) => (v >= 0 ? "+" : "") + v.toFixed(2))
          : el("p", { class: "hint", text: "identical to the current reading" }),
      );
      const apply = el("button", { class: "apply-cf", "data-apply": String(index), text: "apply" });
      apply.addEventListener("click", () => {
        cf.features.forEach((value, i) => {
          inputs[i].value = String(value);
        });
        refreshFormValidity();
        form.requestSubmit(); // the applied alternative becomes the next query
      });
      card.append(apply);
      cfResult.append(card);
    });
  }

  cfButton.addEventListener("click", () => {
    if (!state.query) return;
    const immutable = [...immutableBoxes.entries()]
      .filter(([, box]) => box.checked)
      .map(([name]) => name);
    void requests.counterfactual
      .run((signal) =>
        client.counterfactual(state.query!, cfTarget.value, immutable, 3, state.seed, signal),
      )
      .then((result) => {
        if (!result) return;
        state.cfResult = result;
        renderCounterfactuals();
      })
      .catch((err) => renderCounterfactuals(describe(err)));
  });

  renderPrediction();
  renderExplainControls();
  renderCfControls();
  refreshFormValidity();
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status === 0 ? "service unreachable" : `service error: ${err.message}`;
  }
  return "unexpected error";
}
