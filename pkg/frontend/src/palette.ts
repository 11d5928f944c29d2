/** Stable categorical colors: secondary attribute values hash into a fixed
 * 12-color palette, so a value keeps its color across sessions and reloads. */

export const SECONDARY_PALETTE = [
  "#e6194b", "#f58231", "#ffe119", "#bfef45", "#3cb44b", "#42d4f4",
  "#911eb4", "#f032e6", "#a9a9a9", "#9a6324", "#800000", "#469990",
];

export const PRIMARY_COLOR = "#1f77b4";
export const APPLICANT_COLOR = "#2ca02c";
export const EDGE_COLOR = "rgba(44, 160, 44, 0.35)";

export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function secondaryColor(value: string): string {
  return SECONDARY_PALETTE[fnv1a(value) % SECONDARY_PALETTE.length];
}

export function nodeColor(kind: "applicant" | "attribute", pinned: boolean, label: string): string {
  if (kind === "applicant") return APPLICANT_COLOR;
  return pinned ? PRIMARY_COLOR : secondaryColor(label);
}
