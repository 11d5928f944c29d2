import { clampToViewport, screenToWorld, type Viewport } from "./scene.js";
import type { ViewModel } from "./viewmodel.js";

/** The one server call dragging needs; ApiClient satisfies it. */
export interface MoveApi {
  move(sessionId: string, nodeId: string, x: number, y: number): Promise<{ ok: boolean }>;
}

/** Drag state machine for the graph canvas.
 *
 * Only pinned (primary) nodes are draggable; grabbing an applicant or
 * secondary produces a shake cue and no server traffic. A completed drag
 * issues exactly one move call, with the drop point clamped to the viewport.
 */
export class DragController {
  private dragging: string | null = null;
  private moved = false;
  shakeNode: string | null = null;
  moveCalls = 0;

  constructor(
    private readonly api: MoveApi,
    private readonly vm: ViewModel,
  ) {}

  pointerDown(nodeId: string | null): "drag" | "shake" | "pan" {
    this.shakeNode = null;
    if (nodeId === null) return "pan";
    const node = this.vm.nodes.get(nodeId);
    if (!node) return "pan";
    if (!node.pinned) {
      this.shakeNode = nodeId;
      return "shake";
    }
    this.dragging = nodeId;
    this.moved = false;
    return "drag";
  }

  /** Live visual feedback while dragging; no server call yet. */
  pointerMove(vp: Viewport, sx: number, sy: number): void {
    if (!this.dragging) return;
    this.moved = true;
    const [cx, cy] = clampToViewport(vp, sx, sy);
    const [wx, wy] = screenToWorld(vp, cx, cy);
    this.vm.setLocalPosition(this.dragging, wx, wy);
  }

  /** Finish the drag: one move call for the final clamped position. */
  async pointerUp(vp: Viewport, sx: number, sy: number): Promise<void> {
    const node = this.dragging;
    this.dragging = null;
    if (!node || !this.moved) return;
    const [cx, cy] = clampToViewport(vp, sx, sy);
    const [wx, wy] = screenToWorld(vp, cx, cy);
    this.vm.setLocalPosition(node, wx, wy);
    this.moveCalls += 1;
    await this.api.move(this.vm.sessionId, node, wx, wy);
  }

  get active(): boolean {
    return this.dragging !== null;
  }
}

export interface ConfigState {
  x: string;
  y: string;
  year: number;
  layout: string;
  limit: number | null;
  offset: number | null;
  seed: number;
}

export interface ConfigProblem {
  field: string;
  message: string;
}

/** Mirrors the server's 400s client-side so the submit button can disable. */
export function validateConfig(state: ConfigState): ConfigProblem[] {
  const problems: ConfigProblem[] = [];
  if (!state.x) problems.push({ field: "x", message: "choose a primary attribute" });
  if (!state.y) problems.push({ field: "y", message: "choose a secondary attribute" });
  if (state.x && state.x === state.y) {
    problems.push({ field: "y", message: "primary and secondary must differ" });
  }
  if (state.limit !== null && (!Number.isInteger(state.limit) || state.limit <= 0)) {
    problems.push({ field: "limit", message: "limit must be a positive integer" });
  }
  if (state.offset !== null && (!Number.isInteger(state.offset) || state.offset < 0)) {
    problems.push({ field: "offset", message: "offset must be a non-negative integer" });
  }
  return problems;
}
