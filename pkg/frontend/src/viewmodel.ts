import type {
  EdgePayload,
  NodePayload,
  SessionPayload,
  StepPayload,
  TransitionPayload,
} from "./types.js";

/** Transition animation phases, in the order they play. Disappearing nodes
 * are highlighted first, then removed; appearing nodes are highlighted, then
 * settle into the ordinary style. */
export type Phase = "idle" | "remove-highlight" | "remove" | "add-highlight" | "add";

export const PHASE_ORDER: Phase[] = ["remove-highlight", "remove", "add-highlight", "add"];
export const PHASE_MS = 400;
export const AUTOPLAY_DWELL_MS = 2000;

export interface VmNode {
  id: string;
  kind: "applicant" | "attribute";
  type: string;
  label: string;
  pinned: boolean;
  x: number;
  y: number;
  occurrence?: number;
}

/** Client-side mirror of the server's session state. It never computes graph
 * topology or layout itself; every mutation applies a server payload. */
export class ViewModel {
  sessionId = "";
  dataset = "";
  year = 0;
  years: number[] = [];
  primaryType = "";
  secondaryType = "";
  nodes = new Map<string, VmNode>();
  edges: EdgePayload[] = [];
  autoplay = false;
  phase: Phase = "idle";
  highlighted = new Set<string>();
  selectedApplicant: string | null = null;
  private pendingTransition: TransitionPayload | null = null;
  private requestToken = 0;
  private appliedToken = 0;

  applyCreate(payload: SessionPayload): void {
    this.sessionId = payload.session_id;
    this.dataset = payload.dataset;
    this.year = payload.year;
    this.primaryType = payload.x;
    this.secondaryType = payload.y;
    this.nodes = new Map(payload.nodes.map((n) => [n.id, { ...n }]));
    this.edges = payload.edges.map((e) => [...e] as EdgePayload);
    this.phase = "idle";
    this.highlighted.clear();
    this.pendingTransition = null;
  }

  /** Tag an outgoing step/transition request; stale responses are dropped. */
  nextToken(): number {
    return ++this.requestToken;
  }

  applyStep(payload: StepPayload, token?: number): boolean {
    if (token !== undefined) {
      if (token < this.appliedToken) return false;
      this.appliedToken = token;
    }
    for (const change of payload.changes) {
      const node = this.nodes.get(change.id);
      if (node && !node.pinned) {
        node.x = change.x;
        node.y = change.y;
      }
    }
    return true;
  }

  /** Stage a transition payload; phases are advanced by the caller's timer. */
  beginTransition(payload: TransitionPayload, token?: number): boolean {
    if (token !== undefined) {
      if (token < this.appliedToken) return false;
      this.appliedToken = token;
    }
    this.pendingTransition = payload;
    this.phase = "remove-highlight";
    this.highlighted = new Set([
      ...payload.removed_applicants,
      ...payload.removed_attributes,
    ]);
    return true;
  }

  /** Move to the next transition phase; returns the phase now active. */
  advancePhase(): Phase {
    const payload = this.pendingTransition;
    if (!payload || this.phase === "idle") return this.phase;
    const next = PHASE_ORDER[PHASE_ORDER.indexOf(this.phase) + 1] ?? "idle";
    if (next === "remove") {
      for (const id of [...payload.removed_applicants, ...payload.removed_attributes]) {
        this.nodes.delete(id);
      }
      this.highlighted.clear();
    } else if (next === "add-highlight") {
      for (const [oldId, newId] of payload.kept_applicants) {
        const node = this.nodes.get(oldId);
        if (node && oldId !== newId) {
          this.nodes.delete(oldId);
          this.nodes.set(newId, { ...node, id: newId });
        }
      }
      for (const n of payload.added_nodes) {
        this.nodes.set(n.id, { ...n });
      }
      this.edges = payload.edges.map((e) => [...e] as EdgePayload);
      this.year = payload.to_year;
      this.highlighted = new Set(payload.added_nodes.map((n) => n.id));
    } else if (next === "add" || next === "idle") {
      this.highlighted.clear();
      if (next === "idle") this.pendingTransition = null;
    }
    this.phase = next === "idle" ? "idle" : next;
    if (this.phase === "add") {
      // final phase completes on the next tick
      this.pendingTransition = payload;
    }
    return this.phase;
  }

  /** Ascending year order with wrap-around, for autoplay. */
  nextYear(): number {
    if (!this.years.length) return this.year;
    const idx = this.years.indexOf(this.year);
    return this.years[(idx + 1) % this.years.length];
  }

  setLocalPosition(id: string, x: number, y: number): void {
    const node = this.nodes.get(id);
    if (node) {
      node.x = x;
      node.y = y;
    }
  }

  nodeList(): VmNode[] {
    return [...this.nodes.values()];
  }
}
