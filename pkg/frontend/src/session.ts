/** Studio session state and the mutation recorder.
 *
 * Every server mutation the UI performs is appended to the recorder as
 * an authoring op (1:1 with the service body), so a session replays
 * headlessly via the batch compiler to the same export. View toggles
 * and scene selection are pure client state.
 */

import type { AuthoringOp, AuthoringScript, Point } from "./types.js";

export type ViewMode = "text" | "outline";
export type EditorMode = "overview" | "scene";

export interface UiSessionState {
  projectId: string | null;
  selectedScene: number | null;
  viewMode: ViewMode;
  editorMode: EditorMode;
  playbackCursor: number; // seconds
  pendingPath: Point[] | null;
  appliedPath: Point[] | null; // server-smoothed curve of the last applied clip
  hint: string | null;
}

export function initialSession(): UiSessionState {
  return {
    projectId: null,
    selectedScene: null,
    viewMode: "text",
    editorMode: "overview",
    playbackCursor: 0,
    pendingPath: null,
    appliedPath: null,
    hint: null,
  };
}

export function selectScene(s: UiSessionState, scene: number | null): UiSessionState {
  return {
    ...s,
    selectedScene: scene,
    editorMode: scene === null ? "overview" : "scene",
    playbackCursor: 0,
    pendingPath: null,
    appliedPath: null,
  };
}

export function toggleView(s: UiSessionState): UiSessionState {
  return { ...s, viewMode: s.viewMode === "text" ? "outline" : "text" };
}

export function setPendingPath(s: UiSessionState, path: Point[] | null): UiSessionState {
  return { ...s, pendingPath: path, hint: path === null ? "drag the element to draw a path" : null };
}

/** Applying or cancelling a suggestion always clears the drawn path;
 * an apply swaps in the server-smoothed curve for the overlay. */
export function clearPendingPath(s: UiSessionState, appliedPath: Point[] | null = null): UiSessionState {
  return { ...s, pendingPath: null, appliedPath: appliedPath ?? s.appliedPath, hint: null };
}

export class SessionRecorder {
  private ops: AuthoringOp[] = [];

  record(op: AuthoringOp): void {
    this.ops.push(op);
  }

  get length(): number {
    return this.ops.length;
  }

  toScript(): AuthoringScript {
    return { version: 1, ops: [...this.ops] };
  }

  serialize(): string {
    return JSON.stringify(this.toScript(), null, 2);
  }
}
