// Small DOM builders shared by the panels.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "text") node.textContent = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) node.append(child);
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Horizontal probability bar, width proportional to the fraction. */
export function probabilityBar(label: string, fraction: number): HTMLElement {
  const width = Math.max(1, Math.round(fraction * 100));
  return el("div", { class: "prob-row" }, [
    el("span", { class: "prob-label", text: label }),
    el("div", { class: "prob-track" }, [
      el("div", {
        class: "prob-fill",
        style: `width:${width}%`,
        "data-fraction": String(fraction),
      }),
    ]),
    el("span", { class: "prob-value", text: `${(fraction * 100).toFixed(1)}%` }),
  ]);
}

/**
 * Signed contribution bars growing right (positive, red) or left
 * (negative, blue) from a centre axis, scaled to the largest magnitude.
 */
export function signedBars(
  names: string[],
  values: number[],
  format: (v: number) => string = (v) => v.toFixed(4),
): HTMLElement {
  const peak = Math.max(...values.map(Math.abs), 1e-12);
  const container = el("div", { class: "signed-bars" });
  const order = names
    .map((_, i) => i)
    .sort((a, b) => Math.abs(values[b]) - Math.abs(values[a]));
  for (const i of order) {
    const value = values[i];
    const width = Math.round((Math.abs(value) / peak) * 50);
    container.append(
      el("div", { class: "signed-row", "data-feature": names[i] }, [
        el("span", { class: "signed-label", text: names[i] }),
        el("div", { class: "signed-track" }, [
          el("div", { class: "signed-half left" }, [
            ...(value < 0
              ? [el("div", { class: "bar neg", style: `width:${width}%` })]
              : []),
          ]),
          el("div", { class: "signed-half right" }, [
            ...(value >= 0
              ? [el("div", { class: "bar pos", style: `width:${width}%` })]
              : []),
          ]),
        ]),
        el("span", { class: "signed-value", "data-value": String(value), text: format(value) }),
      ]),
    );
  }
  return container;
}

export function banner(message: string): HTMLElement {
  return el("div", { class: "banner", role: "alert", text: message });
}
