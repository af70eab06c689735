/** Shared shapes of service responses and authoring operations. */

export interface SceneSpan {
  id: number;
  begin_index: number;
  end_index: number;
}

export interface EntityRef {
  name: string;
  kind: "character" | "item";
}

export interface SvoAction {
  id: number;
  subject: string;
  verb: string;
  object: string;
  receiver: string;
  category: string | null;
}

export interface SceneOutline {
  span: SceneSpan;
  text: string;
  characters: EntityRef[];
  items: EntityRef[];
  actions: SvoAction[];
  layout_saved: boolean;
  clip_count: number;
}

export interface OutlineResponse {
  project_id: string;
  revision: number;
  scenes: SceneOutline[];
}

/** One sampled element; the transform fields arrive flattened. */
export interface ElementState {
  element_id: string;
  z: number;
  visible: boolean;
  x: number;
  y: number;
  scale_x: number;
  scale_y: number;
  rotation: number;
  flip_h: boolean;
  flip_v: boolean;
  opacity: number;
  blur: number;
  slot_rotations: Record<string, number>;
}

export interface SampleResponse {
  project_id: string;
  revision: number;
  t: number;
  states: ElementState[];
}

export interface FrameEntry {
  index: number;
  t: number;
  states: ElementState[];
}

export interface FrameManifest {
  project_id: string;
  revision: number;
  scene: number;
  fps: number;
  duration: number;
  count: number;
  frames: FrameEntry[];
}

export interface ParamSpec {
  name: string;
  type: string;
  default: unknown;
  unit?: string;
  required?: boolean;
  choices?: string[];
}

export interface Suggestion {
  id: string;
  category: string;
  display_name: string;
  op_kinds: string[];
  parameter_schema: ParamSpec[];
  design_cell: string;
  score: number;
  rank: number;
}

export interface SuggestionsResponse {
  project_id: string;
  revision: number;
  action: SvoAction;
  suggestions: Suggestion[];
}

export interface ClipCreated {
  project_id: string;
  revision: number;
  clip_id: string;
  duration: number;
  label: string;
  /** Server-smoothed polyline of the clip's path op, for the overlay. */
  smoothed_path: Point[] | null;
}

export interface AssetInfo {
  id: string;
  kind: string;
  path: string;
  mime: string;
  width?: number;
  height?: number;
}

export interface PlacementSpec {
  entity: string;
  variant?: string;
  x: number;
  y: number;
  scale_x?: number;
  scale_y?: number;
  rotation?: number;
  z?: number;
  blur?: number;
}

export type Point = [number, number];

/** Authoring ops mirror the service mutation bodies 1:1; a recorded
 * session replays headlessly through the batch compiler. */
export type AuthoringOp =
  | { op: "set_slot"; entity: string; variant?: string; slot: string; asset: string | null;
      anchor?: Point; offset?: Point; scale?: number; create_variant?: boolean }
  | { op: "set_background"; scene: number; asset: string | null }
  | { op: "set_bgm"; scene: number; asset: string | null; start_offset?: number }
  | { op: "put_layout"; scene: number; placements: PlacementSpec[] }
  | { op: "add_clip"; scene: number; template: string; action?: number | null;
      params?: Record<string, unknown> }
  | { op: "reorder"; scene: number; order: string[] }
  | { op: "delete_clip"; scene: number; clip: string }
  | { op: "reclassify"; scene: number; action: number; category: string };

export interface AuthoringScript {
  version: 1;
  ops: AuthoringOp[];
}
