import { EDGE_COLOR, nodeColor } from "./palette.js";
import type { ViewModel, VmNode } from "./viewmodel.js";

/** World-to-screen mapping. World units are the server's layout units with y
 * growing downward already, so the transform is scale-and-offset only. */
export interface Viewport {
  width: number;
  height: number;
  scale: number;
  offsetX: number;
  offsetY: number;
}

export function defaultViewport(width: number, height: number): Viewport {
  return { width, height, scale: Math.min(width, height) / 900, offsetX: width / 2, offsetY: height / 2 };
}

export function worldToScreen(vp: Viewport, x: number, y: number): [number, number] {
  return [x * vp.scale + vp.offsetX, y * vp.scale + vp.offsetY];
}

export function screenToWorld(vp: Viewport, sx: number, sy: number): [number, number] {
  return [(sx - vp.offsetX) / vp.scale, (sy - vp.offsetY) / vp.scale];
}

export function zoomAt(vp: Viewport, sx: number, sy: number, factor: number): Viewport {
  const scale = Math.min(40, Math.max(0.05, vp.scale * factor));
  const ratio = scale / vp.scale;
  return {
    ...vp,
    scale,
    offsetX: sx - (sx - vp.offsetX) * ratio,
    offsetY: sy - (sy - vp.offsetY) * ratio,
  };
}

export function panBy(vp: Viewport, dx: number, dy: number): Viewport {
  return { ...vp, offsetX: vp.offsetX + dx, offsetY: vp.offsetY + dy };
}

export interface SceneNode {
  id: string;
  kind: "applicant" | "attribute";
  x: number; // screen coordinates
  y: number;
  radius: number;
  color: string;
  pinned: boolean;
  label: string;
  highlighted: boolean;
}

export interface SceneEdge {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
}

export interface Scene {
  edges: SceneEdge[];
  nodes: SceneNode[];
}

export const APPLICANT_RADIUS = 3;
export const ATTRIBUTE_RADIUS = 11;

function nodeRadius(node: VmNode): number {
  return node.kind === "applicant" ? APPLICANT_RADIUS : ATTRIBUTE_RADIUS;
}

/** Pure projection of the view model through a viewport: the renderer draws
 * exactly this, so tests can assert on it without a canvas. */
export function computeScene(vm: ViewModel, vp: Viewport): Scene {
  const edges: SceneEdge[] = [];
  for (const [aid, vid] of vm.edges) {
    const a = vm.nodes.get(aid);
    const v = vm.nodes.get(vid);
    if (!a || !v) continue;
    const [x1, y1] = worldToScreen(vp, a.x, a.y);
    const [x2, y2] = worldToScreen(vp, v.x, v.y);
    edges.push({ x1, y1, x2, y2, color: EDGE_COLOR });
  }
  const nodes: SceneNode[] = [];
  for (const node of vm.nodes.values()) {
    const [x, y] = worldToScreen(vp, node.x, node.y);
    nodes.push({
      id: node.id,
      kind: node.kind,
      x,
      y,
      radius: nodeRadius(node),
      color: nodeColor(node.kind, node.pinned, node.label),
      pinned: node.pinned,
      label: node.label,
      highlighted: vm.highlighted.has(node.id),
    });
  }
  // attributes drawn above applicants; stable order otherwise
  nodes.sort((a, b) => (a.kind === b.kind ? 0 : a.kind === "applicant" ? -1 : 1));
  return { edges, nodes };
}

/** Topmost node whose disc contains the point, with a small touch slack. */
export function hitTest(scene: Scene, sx: number, sy: number, slack = 2): string | null {
  for (let i = scene.nodes.length - 1; i >= 0; i--) {
    const n = scene.nodes[i];
    const dx = n.x - sx;
    const dy = n.y - sy;
    if (dx * dx + dy * dy <= (n.radius + slack) ** 2) return n.id;
  }
  return null;
}

export function clampToViewport(vp: Viewport, sx: number, sy: number): [number, number] {
  return [Math.min(vp.width, Math.max(0, sx)), Math.min(vp.height, Math.max(0, sy))];
}
