/** Playback over a prefetched frames manifest: the studio draws the
 * engine's own sampled states frame by frame and never interpolates.
 * Stop reverts the canvas to the frame-0 (saved layout) states. */

import type { ElementState, FrameManifest } from "./types.js";

export type DrawStates = (states: ElementState[], t: number) => void;

export class PlaybackController {
  private manifest: FrameManifest | null = null;
  private frame = 0;
  private playing = false;

  constructor(private readonly draw: DrawStates) {}

  /** Layouts must be saved server-side before a manifest exists; the
   * play control stays disabled until one is loaded. */
  get playable(): boolean {
    return this.manifest !== null;
  }

  get isPlaying(): boolean {
    return this.playing;
  }

  get cursorSeconds(): number {
    if (!this.manifest) return 0;
    const entry = this.manifest.frames[this.frame];
    return entry ? entry.t : 0;
  }

  load(manifest: FrameManifest): void {
    this.manifest = manifest;
    this.frame = 0;
    this.playing = false;
    this.drawFrame(0);
  }

  play(): void {
    if (!this.manifest) return;
    this.playing = true;
    this.frame = 0;
    this.drawFrame(0);
  }

  /** Advance one frame; returns false when playback finished. */
  tick(): boolean {
    if (!this.playing || !this.manifest) return false;
    if (this.frame + 1 >= this.manifest.count) {
      this.playing = false;
      return false;
    }
    this.frame += 1;
    this.drawFrame(this.frame);
    return true;
  }

  /** Halt and restore the canvas to its initial (t=0) state. */
  stop(): ElementState[] {
    this.playing = false;
    this.frame = 0;
    return this.drawFrame(0);
  }

  statesAt(index: number): ElementState[] {
    if (!this.manifest) return [];
    const entry = this.manifest.frames[index];
    return entry ? entry.states : [];
  }

  private drawFrame(index: number): ElementState[] {
    const states = this.statesAt(index);
    const entry = this.manifest?.frames[index];
    this.draw(states, entry ? entry.t : 0);
    return states;
  }
}
