import { describe, expect, it } from "vitest";

import { escapeHtml, renderMarked } from "../src/highlight.js";

describe("renderMarked", () => {
  it("wraps a single span with its offsets", () => {
    const html = renderMarked("mass protests erupted", [
      { start: 5, end: 13, cssClass: "anchor", title: "Protest" },
    ]);
    expect(html).toBe(
      'mass <mark class="anchor" data-start="5" data-end="13" title="Protest">protests</mark> erupted',
    );
  });

  it("splits overlapping marks into stacked segments", () => {
    const html = renderMarked("abcdef", [
      { start: 0, end: 4, cssClass: "a" },
      { start: 2, end: 6, cssClass: "b" },
    ]);
    expect(html).toBe(
      '<mark class="a" data-start="0" data-end="2">ab</mark>' +
        '<mark class="a b" data-start="2" data-end="4">cd</mark>' +
        '<mark class="b" data-start="4" data-end="6">ef</mark>',
    );
  });

  it("treats offsets as code points, not UTF-16 units", () => {
    //  "🌊🌊 flood" — the two emoji are one code point each
    const text = "🌊🌊 flood";
    const html = renderMarked(text, [{ start: 3, end: 8, cssClass: "anchor" }]);
    expect(html).toContain(">flood</mark>");
    expect(html).toContain('data-start="3"');
  });

  it("escapes markup in text and titles", () => {
    const html = renderMarked("<b> & stuff", [
      { start: 0, end: 3, cssClass: "x", title: '"quoted"' },
    ]);
    expect(html).toContain("&lt;b&gt;");
    expect(html).toContain("&quot;quoted&quot;");
  });

  it("renders plain text when there are no marks", () => {
    expect(renderMarked("nothing here", [])).toBe("nothing here");
  });
});

describe("escapeHtml", () => {
  it("covers the four specials", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;",
    );
  });
});
