import { describe, expect, it } from "vitest";

import detail from "../fixtures/headline_detail.json";
import { compositionSegments, renderDetailPanel } from "../src/views/detail.js";
import type { HeadlineDetail } from "../src/types.js";

const fixture = detail as HeadlineDetail;

describe("detailed emotion analysis panel", () => {
  it("renders the committed fixture (snapshot)", () => {
    expect(renderDetailPanel(fixture)).toMatchSnapshot();
  });

  it("shows the 50/30/20 composition", () => {
    const html = renderDetailPanel(fixture);
    expect(html).toContain("sadness 50%");
    expect(html).toContain("fear 30%");
    expect(html).toContain("anger 20%");
    expect(html).toContain("-0.70"); // valence of the fixture mixture
  });

  it("lists the cross-outlet coverage as clickable rows", () => {
    const html = renderDetailPanel(fixture);
    for (const entry of fixture.cross_outlet) {
      expect(html).toContain(`data-record-id="${entry.record_id}"`);
      expect(html).toContain(entry.outlet);
    }
    expect(html).not.toContain("Unique coverage");
  });

  it("shows the unique-coverage state when no outlet matches", () => {
    const html = renderDetailPanel({ ...fixture, cross_outlet: [] });
    expect(html).toContain("Unique coverage");
  });

  describe("composition segments invariant", () => {
    it("always sums to 100 with a labeled remainder", () => {
      const segments = compositionSegments([
        { label: "sadness", percent: 41.5 },
        { label: "fear", percent: 22.0 },
        { label: "anger", percent: 11.0 },
      ]);
      const total = segments.reduce((a, s) => a + s.percent, 0);
      expect(total).toBeCloseTo(100, 9);
      expect(segments[segments.length - 1].label).toBe("other");
      expect(segments[segments.length - 1].percent).toBeCloseTo(25.5, 9);
    });

    it("adds no remainder when the breakdown already covers 100", () => {
      const segments = compositionSegments(fixture.breakdown);
      expect(segments.map((s) => s.label)).toEqual(["sadness", "fear", "anger"]);
      expect(segments.reduce((a, s) => a + s.percent, 0)).toBeCloseTo(100, 9);
    });

    it("drops zero segments and rescales defensively above 100", () => {
      const segments = compositionSegments([
        { label: "joy", percent: 80 },
        { label: "neutral", percent: 0 },
        { label: "surprise", percent: 40 },
      ]);
      expect(segments.map((s) => s.label)).toEqual(["joy", "surprise"]);
      expect(segments.reduce((a, s) => a + s.percent, 0)).toBeCloseTo(100, 9);
    });
  });
});
