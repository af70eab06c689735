/** Outline Browser projections: the same scene data rendered either as
 * original text or as a token-classified action outline. A projection
 * is pure; toggling views never touches the server. */

import type { TokenRole } from "./theme.js";
import type { SceneOutline, SvoAction } from "./types.js";

export interface TokenSpan {
  text: string;
  role: TokenRole;
}

export interface ActionRow {
  actionId: number;
  category: string | null;
  spans: TokenSpan[];
}

export type OutlineView =
  | { mode: "text"; sceneId: number; text: string }
  | { mode: "outline"; sceneId: number; entities: TokenSpan[]; rows: ActionRow[] };

function roleOf(scene: SceneOutline, name: string): TokenRole {
  if (scene.characters.some((c) => c.name === name)) return "character";
  if (scene.items.some((i) => i.name === name)) return "item";
  return "plain";
}

function objectRole(scene: SceneOutline, action: SvoAction): TokenRole {
  if (action.category === "speak" || action.category === "mental") return "dialogue";
  const role = roleOf(scene, action.object);
  return role === "plain" && action.object ? "item" : role;
}

export function actionRow(scene: SceneOutline, action: SvoAction): ActionRow {
  const spans: TokenSpan[] = [
    { text: action.subject, role: roleOf(scene, action.subject) },
    { text: action.verb.toUpperCase(), role: "action" },
  ];
  if (action.object) {
    spans.push({ text: action.object, role: objectRole(scene, action) });
  }
  if (action.receiver) {
    spans.push({ text: action.receiver, role: roleOf(scene, action.receiver) });
  }
  return { actionId: action.id, category: action.category, spans };
}

export function buildOutlineView(scene: SceneOutline, mode: "text" | "outline"): OutlineView {
  if (mode === "text") {
    return { mode: "text", sceneId: scene.span.id, text: scene.text };
  }
  const entities: TokenSpan[] = [
    ...scene.characters.map((c) => ({ text: c.name, role: "character" as const })),
    ...scene.items.map((i) => ({ text: i.name, role: "item" as const })),
  ];
  const rows = [...scene.actions]
    .sort((a, b) => a.id - b.id)
    .map((a) => actionRow(scene, a));
  return { mode: "outline", sceneId: scene.span.id, entities, rows };
}

/** The four classes a legend must show, in display order. */
export const LEGEND: TokenRole[] = ["character", "item", "action", "dialogue"];
