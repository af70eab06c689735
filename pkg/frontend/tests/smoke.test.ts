/** Studio smoke against a live service: outline toggle, category
 * override, suggestion-chip apply with a drawn path, animation-list
 * reorder/delete, and export. The console must stay clean. */

import { readFileSync } from "node:fs";

import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";

import { StudioApi } from "../src/api.js";
import { buildOutlineView } from "../src/outline.js";
import {
  animationRows,
  applySuggestion,
  chipsFor,
  chooseBackground,
  deleteAnimation,
  overrideCategory,
  reorderAnimation,
  saveLayout,
} from "../src/panels.js";
import { PathRecorder } from "../src/pathcapture.js";
import { SessionRecorder, initialSession, selectScene, setPendingPath, toggleView } from "../src/session.js";
import { STORY_FILE, startService, type LiveService } from "./service.js";

let service: LiveService;
let api: StudioApi;
let pid: string;
const recorder = new SessionRecorder();
let session = initialSession();
const errorSpy = vi.spyOn(console, "error");

beforeAll(async () => {
  service = await startService();
  api = new StudioApi(service.base);
  const created = await api.createProject(readFileSync(STORY_FILE, "utf-8"));
  pid = created.project_id;
  session = { ...selectScene(session, 1), projectId: pid };
}, 120_000);

afterAll(() => {
  service?.stop();
  expect(errorSpy).not.toHaveBeenCalled();
});

describe("studio smoke", () => {
  it("outline toggle flips the projection without mutating the server", async () => {
    const before = await api.outline(pid);
    const scene = before.scenes[1]!;
    const textView = buildOutlineView(scene, session.viewMode);
    session = toggleView(session);
    const outlineView = buildOutlineView(scene, session.viewMode);
    expect(textView.mode).toBe("text");
    expect(outlineView.mode).toBe("outline");
    const after = await api.outline(pid);
    expect(after.revision).toBe(before.revision);
    expect(after.scenes).toEqual(before.scenes);
  });

  it("category override sticks and is recorded", async () => {
    await overrideCategory(api, recorder, pid, 1, 2, "ptrans");
    const outline = await api.outline(pid);
    const action = outline.scenes[1]!.actions.find((a) => a.id === 2)!;
    expect(action.category).toBe("ptrans");
    await overrideCategory(api, recorder, pid, 1, 2, "move"); // put it back
    expect(recorder.toScript().ops.filter((o) => o.op === "reclassify")).toHaveLength(2);
  });

  it("suggestion chip applies with a drawn path of recorded points", async () => {
    await chooseBackground(api, recorder, pid, 1, "bg.room");
    await saveLayout(api, recorder, pid, 1, [
      { entity: "old woman", x: 1050, y: 600, z: 2 },
      { entity: "princess", x: 350, y: 620, z: 3 },
    ]);
    const pen = new PathRecorder();
    pen.start(350, 620);
    for (let i = 1; i <= 30; i++) pen.move(350 + i * 20, 620 + Math.sin(i / 5) * 14);
    const drawn = pen.finish();
    expect(drawn).not.toBeNull();
    expect(drawn!.length).toBeGreaterThanOrEqual(2);
    session = setPendingPath(session, drawn);

    const sugg = await api.suggestions(pid, 1, 6); // princess FELL bed -> ptrans
    const chip = chipsFor(sugg.suggestions).find((c) => c.templateId === "ptrans.path")!;
    const { session: next, clip } = await applySuggestion(api, recorder, session, 1, sugg.action, chip);
    session = next;
    expect(clip.clip_id).toBe("c0");
    expect(clip.duration).toBeGreaterThan(0);
    expect(session.pendingPath).toBeNull(); // cleared on apply
  });

  it("animation list reorders and deletes", async () => {
    const second = await api.addClip(pid, 1, "ptrans.dis_reappear", 6, { target: [1380, 660] });
    recorder.record({ op: "add_clip", scene: 1, template: "ptrans.dis_reappear", action: 6,
                      params: { target: [1380, 660] } });
    const rows = animationRows([
      { id: "c0", label: "walk" },
      { id: second.clip_id, label: "blink" },
    ]);
    expect(rows.map((r) => r.order)).toEqual([1, 2]);

    const order = await reorderAnimation(api, recorder, pid, 1, ["c0", second.clip_id], 1, 0);
    expect(order).toEqual([second.clip_id, "c0"]);

    await deleteAnimation(api, recorder, pid, 1, second.clip_id);
    const sampleAfter = await api.sample(pid, 1, 0);
    expect(sampleAfter.states.length).toBeGreaterThan(0);
  });

  it("export button yields a valid document", async () => {
    const bytes = await api.exportProject(pid);
    expect(bytes.length).toBeGreaterThan(100);
    const doc = JSON.parse(Buffer.from(bytes).toString("utf-8"));
    expect(doc.format).toBe("motioncomic");
    expect(doc.scenes.some((s: { id: number }) => s.id === 1)).toBe(true);
  });

  it("errors surface as typed ApiError, not console noise", async () => {
    await expect(api.sample(pid, 0, 0)).rejects.toMatchObject({ code: "UnsavedLayout", status: 409 });
    await expect(api.addClip(pid, 1, "no.such", null, {})).rejects.toMatchObject({ code: "UnknownTemplate" });
  });
});
