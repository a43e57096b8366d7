import { describe, expect, it } from "vitest";

import type { GraphDocument } from "../src/api.js";
import { layeredLayout } from "../src/layout.js";
import { arcMarkup, dialogMarkup, escapeXml, graphSvg, treeMarkup } from "../src/render.js";

const P = { x: 0, y: 0 };
const Q = { x: 200, y: 0 };

describe("arc styles", () => {
  it("gives the three relation kinds three distinct styles", () => {
    const directed = arcMarkup("directed", "A", "B", P, Q);
    const bidirected = arcMarkup("bidirected", "A", "B", P, Q);
    const undirected = arcMarkup("undirected", "A", "B", P, Q);

    expect(directed).toContain("marker-end");
    expect(directed).not.toContain("marker-start");
    expect(directed).not.toContain("stroke-dasharray");

    expect(bidirected).toContain("marker-start");
    expect(bidirected).toContain("marker-end");

    expect(undirected).toContain("stroke-dasharray");
    expect(undirected).not.toContain("marker");

    const classes = [directed, bidirected, undirected].map(
      (markup) => markup.match(/class="([^"]+)"/)![1],
    );
    expect(new Set(classes).size).toBe(3);
  });
});

describe("graph svg", () => {
  const doc: GraphDocument = {
    class: "under-constrained",
    nodes: [
      { name: "A", solve_order: 0, attributes: null },
      { name: "B", solve_order: null, attributes: null },
      { name: "C", solve_order: null, attributes: null },
    ],
    arcs: [
      { tail: "A", head: "B", kind: "directed" },
      { tail: "B", head: "C", kind: "undirected" },
    ],
    residual: ["g1"],
  };

  it("renders every node and arc from the document", () => {
    const svg = graphSvg(doc, layeredLayout(doc), new Set());
    expect(svg).toContain('data-node="A"');
    expect(svg).toContain('data-node="B"');
    expect(svg).toContain('data-tail="A" data-head="B" data-kind="directed"');
    expect(svg).toContain('data-tail="B" data-head="C" data-kind="undirected"');
  });

  it("marks unresolved nodes and selection", () => {
    const svg = graphSvg(doc, layeredLayout(doc), new Set(["B"]));
    expect(svg).toContain("node-unresolved");
    expect(svg).toContain("node-selected");
  });
});

describe("release dialog markup", () => {
  it("lists candidates with validity flags and a cancel control", () => {
    const html = dialogMarkup({
      description: "Setting CS = 15",
      candidates: [
        { equation: "f9", valid: true },
        { equation: "f3", valid: false },
      ],
      rejection: null,
    });
    expect(html).toContain('data-release="f9"');
    expect(html).toContain("candidate valid");
    expect(html).toContain("candidate invalid");
    expect(html).toContain("data-cancel-release");
  });

  it("is empty when no release is pending", () => {
    expect(dialogMarkup(null)).toBe("");
  });

  it("shows the rejection reason when a click was refused", () => {
    const html = dialogMarkup({
      description: "x",
      candidates: [],
      rejection: "releasing f3 would leave the system over-constrained",
    });
    expect(html).toContain("rejection");
    expect(html).toContain("over-constrained");
  });
});

describe("kb tree markup", () => {
  it("renders folders recursively with draggable mechanisms", () => {
    const html = treeMarkup({
      folders: {
        university: {
          folders: {},
          mechanisms: [
            { name: "f3", participants: ["SFR", "NS", "NF"], kind: "core", description: "ratio" },
          ],
        },
      },
      mechanisms: [],
    });
    expect(html).toContain('data-folder="university"');
    expect(html).toContain('data-mechanism="university/f3"');
    expect(html).toContain('draggable="true"');
  });
});

describe("escaping", () => {
  it("escapes markup-significant characters", () => {
    expect(escapeXml('a<b>&"c')).toBe("a&lt;b&gt;&amp;&quot;c");
  });
});
