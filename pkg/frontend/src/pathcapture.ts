/** Drag capture for path drawing: pointer samples thin to a polyline
 * (points closer than the step are dropped). A click without a drag
 * yields no path; callers show a hint instead of posting a clip. */

import type { Point } from "./types.js";

const MIN_STEP = 2.0; // canvas units between kept samples

export class PathRecorder {
  private points: Point[] = [];
  private active = false;

  get recording(): boolean {
    return this.active;
  }

  start(x: number, y: number): void {
    this.points = [[x, y]];
    this.active = true;
  }

  move(x: number, y: number): void {
    if (!this.active) return;
    const last = this.points[this.points.length - 1];
    if (last === undefined) return;
    const dx = x - last[0];
    const dy = y - last[1];
    if (Math.hypot(dx, dy) >= MIN_STEP) {
      this.points.push([x, y]);
    }
  }

  /** Returns the thinned polyline, or null for a click without a drag. */
  finish(): Point[] | null {
    this.active = false;
    const captured = this.points;
    this.points = [];
    return captured.length >= 2 ? captured : null;
  }

  cancel(): void {
    this.active = false;
    this.points = [];
  }
}
