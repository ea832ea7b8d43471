import { describe, expect, it } from "vitest";

import { describeWidgets, readWidgetValue } from "../src/controls.js";
import type { ControlSpec } from "../src/types.js";

const ALL_FIVE: ControlSpec[] = [
  { type: "slider", label: "gain", min: 0, max: 2, step: 0.01, default: 1 },
  { type: "number", label: "offset", default: 3 },
  { type: "text", label: "note", default: "hi" },
  { type: "dropdown", label: "mode", options: ["a", "b", "c"], default: "b" },
  { type: "toggle", label: "wet", default: true },
];

describe("describeWidgets", () => {
  it("maps the gain card to one range input with its constraints", () => {
    const widgets = describeWidgets([ALL_FIVE[0]]);
    expect(widgets).toHaveLength(1);
    expect(widgets[0]).toMatchObject({
      kind: "range",
      label: "gain",
      min: 0,
      max: 2,
      step: 0.01,
      value: 1,
    });
  });

  it("renders all five control types in declaration order", () => {
    const widgets = describeWidgets(ALL_FIVE);
    expect(widgets.map((w) => w.kind)).toEqual([
      "range",
      "number",
      "text",
      "select",
      "checkbox",
    ]);
    expect(widgets.map((w) => w.label)).toEqual(["gain", "offset", "note", "mode", "wet"]);
    expect(widgets[3].options).toEqual(["a", "b", "c"]);
    expect(widgets[3].value).toBe("b");
    expect(widgets[4].value).toBe(true);
  });

  it("produces an empty list for an empty card", () => {
    expect(describeWidgets([])).toEqual([]);
  });

  it("gives every widget hover text naming its label", () => {
    for (const w of describeWidgets(ALL_FIVE)) {
      expect(w.hoverText).toContain(w.label);
    }
  });
});

describe("readWidgetValue", () => {
  const [gain, offset, note, mode, wet] = describeWidgets(ALL_FIVE);

  it("clamps range values to the declared bounds", () => {
    expect(readWidgetValue(gain, "1.5")).toBe(1.5);
    expect(readWidgetValue(gain, "99")).toBe(2);
    expect(readWidgetValue(gain, "-1")).toBe(0);
  });

  it("falls back to the default on non-numeric input", () => {
    expect(readWidgetValue(gain, "oops")).toBe(1);
    expect(readWidgetValue(offset, "7.25")).toBe(7.25);
  });

  it("rejects unknown dropdown options", () => {
    expect(readWidgetValue(mode, "c")).toBe("c");
    expect(readWidgetValue(mode, "zz")).toBe("b");
  });

  it("keeps text verbatim and toggles boolean", () => {
    expect(readWidgetValue(note, "hello = world")).toBe("hello = world");
    expect(readWidgetValue(wet, false)).toBe(false);
    expect(readWidgetValue(wet, true)).toBe(true);
  });
});
