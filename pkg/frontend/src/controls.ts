/** Declarative control specs -> widget descriptors and DOM inputs.
 *
 * The descriptor layer is pure so the card-to-widget mapping can be tested
 * without a browser; buildControlPanel turns descriptors into live inputs.
 */

import type { ControlSpec, ControlValue } from "./types.js";

export interface WidgetDescriptor {
  /** HTML input flavor: range | number | text | select | checkbox. */
  kind: "range" | "number" | "text" | "select" | "checkbox";
  label: string;
  value: ControlValue;
  min?: number;
  max?: number;
  step?: number;
  options?: string[];
  /** One-line text for the info box while the widget is hovered. */
  hoverText: string;
}

export const NO_CONTROLS_PLACEHOLDER = "no controls";

export function describeWidget(spec: ControlSpec): WidgetDescriptor {
  switch (spec.type) {
    case "slider":
      return {
        kind: "range",
        label: spec.label,
        value: spec.default,
        min: spec.min,
        max: spec.max,
        step: spec.step,
        hoverText: `${spec.label}: ${spec.min} to ${spec.max}, step ${spec.step}`,
      };
    case "number":
      return {
        kind: "number",
        label: spec.label,
        value: spec.default,
        hoverText: `${spec.label}: any number`,
      };
    case "text":
      return {
        kind: "text",
        label: spec.label,
        value: spec.default,
        hoverText: `${spec.label}: free text`,
      };
    case "dropdown":
      return {
        kind: "select",
        label: spec.label,
        value: spec.default,
        options: [...spec.options],
        hoverText: `${spec.label}: one of ${spec.options.join(", ")}`,
      };
    case "toggle":
      return {
        kind: "checkbox",
        label: spec.label,
        value: spec.default,
        hoverText: `${spec.label}: on or off`,
      };
  }
}

export function describeWidgets(specs: ControlSpec[]): WidgetDescriptor[] {
  return specs.map(describeWidget);
}

/** Clamp-and-coerce a raw input string back to a legal control value. */
export function readWidgetValue(desc: WidgetDescriptor, raw: string | boolean): ControlValue {
  if (desc.kind === "checkbox") {
    return raw === true || raw === "true";
  }
  if (desc.kind === "range" || desc.kind === "number") {
    let value = Number(raw);
    if (!Number.isFinite(value)) {
      value = desc.value as number;
    }
    if (desc.min !== undefined) value = Math.max(desc.min, value);
    if (desc.max !== undefined) value = Math.min(desc.max, value);
    return value;
  }
  if (desc.kind === "select") {
    return desc.options!.includes(String(raw)) ? String(raw) : (desc.value as string);
  }
  return String(raw);
}

export interface ControlPanel {
  root: HTMLElement;
  /** Current form values, keyed by control label. */
  values(): Record<string, ControlValue>;
  /** Highlight one field (validation failures) or clear all highlights. */
  highlight(label: string | null): void;
}

export function buildControlPanel(
  doc: Document,
  specs: ControlSpec[],
  onHover: (text: string) => void,
): ControlPanel {
  const root = doc.createElement("div");
  root.className = "control-panel";
  const fields = new Map<string, { desc: WidgetDescriptor; input: HTMLInputElement | HTMLSelectElement; row: HTMLElement }>();

  if (specs.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "placeholder";
    empty.textContent = NO_CONTROLS_PLACEHOLDER;
    root.appendChild(empty);
  }

  for (const desc of describeWidgets(specs)) {
    const row = doc.createElement("label");
    row.className = "control-row";
    const caption = doc.createElement("span");
    caption.textContent = desc.label;
    row.appendChild(caption);

    let input: HTMLInputElement | HTMLSelectElement;
    if (desc.kind === "select") {
      const select = doc.createElement("select");
      for (const option of desc.options!) {
        const el = doc.createElement("option");
        el.value = option;
        el.textContent = option;
        select.appendChild(el);
      }
      select.value = String(desc.value);
      input = select;
    } else {
      const el = doc.createElement("input");
      el.type = desc.kind;
      if (desc.kind === "checkbox") {
        el.checked = desc.value === true;
      } else {
        if (desc.min !== undefined) el.min = String(desc.min);
        if (desc.max !== undefined) el.max = String(desc.max);
        if (desc.step !== undefined) el.step = String(desc.step);
        el.value = String(desc.value);
      }
      input = el;
    }
    input.name = desc.label;
    input.addEventListener("mouseenter", () => onHover(desc.hoverText));
    row.appendChild(input);
    root.appendChild(row);
    fields.set(desc.label, { desc, input, row });
  }

  return {
    root,
    values() {
      const out: Record<string, ControlValue> = {};
      for (const [label, field] of fields) {
        const raw =
          field.input instanceof HTMLInputElement && field.input.type === "checkbox"
            ? field.input.checked
            : field.input.value;
        out[label] = readWidgetValue(field.desc, raw);
      }
      return out;
    },
    highlight(label) {
      for (const [name, field] of fields) {
        field.row.classList.toggle("invalid", label !== null && name === label);
      }
    },
  };
}
