/** Canvas projection of sampled element states.
 *
 * Thin-client rule: the draw list carries the server's states verbatim
 * (no interpolation, no math); painting only maps them to canvas calls.
 * Parity tests diff the draw list's states against GET sample(t).
 */

import type { ElementState, Point } from "./types.js";

export interface DrawCommand {
  state: ElementState;
}

/** States arrive z-sorted from the service; keep order, drop invisibles. */
export function drawList(states: ElementState[]): DrawCommand[] {
  return states.filter((s) => s.visible).map((state) => ({ state }));
}

export interface PaintHooks {
  image(elementId: string, x: number, y: number, opts: {
    scaleX: number; scaleY: number; rotation: number;
    flipH: boolean; flipV: boolean; opacity: number; blur: number;
    slotRotations: Record<string, number>;
  }): void;
  pathOverlay(points: Point[]): void;
}

/** Replays a draw list through injected hooks (a real 2D context in the
 * browser shell, a collector in tests). */
export function paint(commands: DrawCommand[], hooks: PaintHooks, pendingPath: Point[] | null): void {
  for (const { state } of commands) {
    hooks.image(state.element_id, state.x, state.y, {
      scaleX: state.scale_x,
      scaleY: state.scale_y,
      rotation: state.rotation,
      flipH: state.flip_h,
      flipV: state.flip_v,
      opacity: state.opacity,
      blur: state.blur,
      slotRotations: state.slot_rotations,
    });
  }
  if (pendingPath && pendingPath.length >= 2) {
    hooks.pathOverlay(pendingPath);
  }
}
