/**
 * Span highlighting over sentence text.
 *
 * Marks carry exact character offsets from the API; overlapping marks are
 * split into segments whose class lists stack. Offsets are code-point
 * indices, so slicing goes through Array.from, never String.slice on
 * UTF-16 units.
 */

export interface Mark {
  start: number;
  end: number;
  cssClass: string;
  title?: string;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function slice(codePoints: string[], start: number, end: number): string {
  return codePoints.slice(start, end).join("");
}

/** Render text with <mark> segments; data-start/data-end keep the offsets. */
export function renderMarked(text: string, marks: Mark[]): string {
  const codePoints = Array.from(text);
  const boundaries = new Set<number>([0, codePoints.length]);
  for (const mark of marks) {
    boundaries.add(Math.max(0, mark.start));
    boundaries.add(Math.min(codePoints.length, mark.end));
  }
  const points = Array.from(boundaries).sort((a, b) => a - b);
  const pieces: string[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [from, to] = [points[i], points[i + 1]];
    if (from >= to) continue;
    const covering = marks.filter((m) => m.start <= from && to <= m.end);
    const segment = escapeHtml(slice(codePoints, from, to));
    if (covering.length === 0) {
      pieces.push(segment);
      continue;
    }
    const classes = Array.from(new Set(covering.map((m) => m.cssClass))).sort();
    const titles = covering.map((m) => m.title).filter((t): t is string => !!t);
    const title = titles.length ? ` title="${escapeHtml(titles.join(", "))}"` : "";
    pieces.push(
      `<mark class="${classes.join(" ")}" data-start="${from}" data-end="${to}"${title}>` +
        segment +
        "</mark>",
    );
  }
  return pieces.join("");
}
