/** Payload shapes of the backend /api routes. The client never derives graph
 * facts itself: everything rendered traces back to one of these. */

export interface DatasetInfo {
  id: string;
  nodes: number;
  edges: number;
}

export interface AttributeInfo {
  type: string;
  value_count: number;
}

export interface NodePayload {
  id: string;
  kind: "applicant" | "attribute";
  type: string;
  label: string;
  pinned: boolean;
  x: number;
  y: number;
  occurrence?: number;
}

export type EdgePayload = [string, string];

export interface SessionPayload {
  session_id: string;
  dataset: string;
  year: number;
  x: string;
  y: string;
  nodes: NodePayload[];
  edges: EdgePayload[];
}

export interface StepPayload {
  changes: { id: string; x: number; y: number }[];
  converged: boolean;
  iterations: number;
}

export interface TransitionPayload {
  from_year: number;
  to_year: number;
  kept_applicants: [string, string][];
  removed_applicants: string[];
  added_applicants: string[];
  removed_edges: EdgePayload[];
  added_edges: EdgePayload[];
  retained_attributes: string[];
  removed_attributes: string[];
  added_nodes: NodePayload[];
  edges: EdgePayload[];
}

export interface ChartSeries {
  attribute_id: string;
  label: string;
  points: [number, number][];
}

export interface ApplicantDetail {
  id: string;
  label: string;
  year: number;
  props: Record<string, string>;
  attributes: { type: string; value: string }[];
}

export interface SessionRequest {
  year: number;
  x: string;
  y: string;
  limit?: number | null;
  offset?: number | null;
  layout: string;
  seed: number;
}
