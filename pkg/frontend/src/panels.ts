/** Panel controllers: suggestion chips with parameter forms, the
 * animation list, category overrides, and layout/background edits.
 *
 * Every mutation goes through the API and is recorded 1:1 on the
 * session recorder; the displayed result is always the server's answer
 * (optimistic updates are forbidden: callers re-render from responses).
 */

import type { StudioApi } from "./api.js";
import type { SessionRecorder, UiSessionState } from "./session.js";
import { clearPendingPath } from "./session.js";
import type {
  ClipCreated,
  ParamSpec,
  PlacementSpec,
  Point,
  Suggestion,
  SvoAction,
} from "./types.js";

export interface ChipModel {
  templateId: string;
  label: string;
  score: number;
  rank: number;
  fields: FormField[];
}

export interface FormField {
  name: string;
  kind: "slider" | "number" | "text" | "select" | "toggle" | "path";
  value: unknown;
  unit?: string;
  choices?: string[];
}

function fieldFor(spec: ParamSpec): FormField {
  if (spec.type === "number" && spec.unit === "units/s") {
    return { name: spec.name, kind: "slider", value: spec.default, unit: spec.unit };
  }
  if (spec.type === "number") {
    return { name: spec.name, kind: "number", value: spec.default, unit: spec.unit };
  }
  if (spec.type === "enum") {
    return { name: spec.name, kind: "select", value: spec.default, choices: spec.choices ?? [] };
  }
  if (spec.type === "bool") {
    return { name: spec.name, kind: "toggle", value: spec.default };
  }
  if (spec.type === "polyline") {
    return { name: spec.name, kind: "path", value: null };
  }
  return { name: spec.name, kind: "text", value: spec.default };
}

export function chipsFor(suggestions: Suggestion[]): ChipModel[] {
  return suggestions.map((s) => ({
    templateId: s.id,
    label: `${s.display_name} (${s.score})`,
    score: s.score,
    rank: s.rank,
    fields: s.parameter_schema.map(fieldFor),
  }));
}

/** Collect non-null form values into the clip params body. */
export function paramsFrom(fields: FormField[], drawnPath: Point[] | null): Record<string, unknown> {
  const params: Record<string, unknown> = {};
  for (const field of fields) {
    if (field.kind === "path") {
      if (drawnPath) params[field.name] = drawnPath;
    } else if (field.value !== null && field.value !== undefined) {
      params[field.name] = field.value;
    }
  }
  return params;
}

export async function applySuggestion(
  api: StudioApi,
  recorder: SessionRecorder,
  session: UiSessionState,
  scene: number,
  action: SvoAction,
  chip: ChipModel,
): Promise<{ session: UiSessionState; clip: ClipCreated }> {
  if (session.projectId === null) throw new Error("no project open");
  const params = paramsFrom(chip.fields, session.pendingPath);
  const clip = await api.addClip(session.projectId, scene, chip.templateId, action.id, params);
  recorder.record({ op: "add_clip", scene, template: chip.templateId, action: action.id, params });
  return { session: clearPendingPath(session, clip.smoothed_path), clip };
}

export async function overrideCategory(
  api: StudioApi,
  recorder: SessionRecorder,
  pid: string,
  scene: number,
  action: number,
  category: string,
): Promise<void> {
  await api.reclassify(pid, scene, action, category);
  recorder.record({ op: "reclassify", scene, action, category });
}

export async function saveLayout(
  api: StudioApi,
  recorder: SessionRecorder,
  pid: string,
  scene: number,
  placements: PlacementSpec[],
): Promise<void> {
  await api.putLayout(pid, scene, placements);
  recorder.record({ op: "put_layout", scene, placements });
}

export async function chooseBackground(
  api: StudioApi,
  recorder: SessionRecorder,
  pid: string,
  scene: number,
  asset: string | null,
): Promise<void> {
  await api.setBackground(pid, scene, asset);
  recorder.record({ op: "set_background", scene, asset });
}

export async function swapSlotAsset(
  api: StudioApi,
  recorder: SessionRecorder,
  pid: string,
  entity: string,
  variant: string,
  slot: string,
  asset: string | null,
): Promise<void> {
  await api.setSlot(pid, entity, { variant, slot, asset });
  recorder.record({ op: "set_slot", entity, variant, slot, asset });
}

// --- animation list ---------------------------------------------------------

export interface AnimationRow {
  order: number; // 1-based display number
  clipId: string;
  label: string;
}

export function animationRows(clips: { id: string; label: string }[]): AnimationRow[] {
  return clips.map((c, i) => ({ order: i + 1, clipId: c.id, label: c.label }));
}

/** Drag-reorder: move the clip at `from` to position `to`, then push
 * the full id order to the server (multiset unchanged). */
export async function reorderAnimation(
  api: StudioApi,
  recorder: SessionRecorder,
  pid: string,
  scene: number,
  ids: string[],
  from: number,
  to: number,
): Promise<string[]> {
  const order = [...ids];
  const moved = order.splice(from, 1)[0];
  if (moved === undefined) throw new Error(`no clip at index ${from}`);
  order.splice(to, 0, moved);
  const resp = await api.reorderClips(pid, scene, order);
  recorder.record({ op: "reorder", scene, order });
  return resp.order;
}

export async function deleteAnimation(
  api: StudioApi,
  recorder: SessionRecorder,
  pid: string,
  scene: number,
  clipId: string,
): Promise<void> {
  await api.deleteClip(pid, scene, clipId);
  recorder.record({ op: "delete_clip", scene, clip: clipId });
}
