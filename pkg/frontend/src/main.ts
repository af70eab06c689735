/** Browser shell: wires the outline browser, canvas workspace, element
 * editor, suggestion chips, animation list, and playback controls to
 * the service. All state shown here came back from an endpoint. */

import { StudioApi } from "./api.js";
import { drawList, paint } from "./canvasview.js";
import { LEGEND, buildOutlineView } from "./outline.js";
import {
  animationRows,
  applySuggestion,
  chipsFor,
  chooseBackground,
  deleteAnimation,
  overrideCategory,
  reorderAnimation,
  saveLayout,
  swapSlotAsset,
} from "./panels.js";
import { PathRecorder } from "./pathcapture.js";
import { PlaybackController } from "./playback.js";
import {
  SessionRecorder,
  initialSession,
  selectScene,
  setPendingPath,
  toggleView,
} from "./session.js";
import { CANVAS, TOKEN_COLORS } from "./theme.js";
import type { ElementState, OutlineResponse, PlacementSpec, SceneOutline } from "./types.js";

const api = new StudioApi(localStorage.getItem("motioncomic.base") ?? "http://127.0.0.1:8008");
const recorder = new SessionRecorder();
let session = initialSession();
let outline: OutlineResponse | null = null;
let clipCache: { id: string; label: string }[] = [];
const pathRecorder = new PathRecorder();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const canvas = $("workspace") as unknown as HTMLCanvasElement;
const ctx = canvas.getContext("2d");

function paintStates(states: ElementState[]): void {
  if (!ctx) return;
  ctx.clearRect(0, 0, CANVAS.width, CANVAS.height);
  ctx.fillStyle = "#f4f1ea";
  ctx.fillRect(0, 0, CANVAS.width, CANVAS.height);
  paint(drawList(states), {
    image(elementId, x, y, opts) {
      ctx.save();
      ctx.translate(x, y);
      ctx.rotate(opts.rotation);
      ctx.scale(opts.flipH ? -opts.scaleX : opts.scaleX, opts.flipV ? -opts.scaleY : opts.scaleY);
      ctx.globalAlpha = opts.opacity;
      if (opts.blur > 0) ctx.filter = `blur(${opts.blur}px)`;
      ctx.fillStyle = "#7a9acc";
      ctx.fillRect(-40, -60, 80, 120);
      ctx.fillStyle = "#222";
      ctx.font = "14px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(elementId, 0, 80);
      ctx.restore();
    },
    pathOverlay(points) {
      ctx.save();
      ctx.setLineDash([6, 6]);
      ctx.strokeStyle = "#444";
      ctx.beginPath();
      const [first, ...rest] = points;
      if (first) ctx.moveTo(first[0], first[1]);
      for (const [x, y] of rest) ctx.lineTo(x, y);
      ctx.stroke();
      ctx.restore();
    },
  }, session.pendingPath ?? session.appliedPath);
}

const playback = new PlaybackController((states) => paintStates(states));

function currentScene(): SceneOutline | null {
  if (!outline || session.selectedScene === null) return null;
  return outline.scenes.find((s) => s.span.id === session.selectedScene) ?? null;
}

function renderOutline(): void {
  const host = $("outline");
  host.replaceChildren();
  if (!outline) return;
  const legend = document.createElement("div");
  legend.className = "legend";
  for (const role of LEGEND) {
    const chip = document.createElement("span");
    chip.textContent = role;
    chip.style.background = TOKEN_COLORS[role];
    legend.appendChild(chip);
  }
  host.appendChild(legend);
  for (const scene of outline.scenes) {
    const card = document.createElement("section");
    card.className = scene.span.id === session.selectedScene ? "scene selected" : "scene";
    const title = document.createElement("h3");
    title.textContent = `Scene ${scene.span.id} (${scene.span.begin_index}-${scene.span.end_index})`;
    title.onclick = () => {
      session = selectScene(session, scene.span.id);
      void refreshScene();
      renderOutline();
    };
    card.appendChild(title);
    const view = buildOutlineView(scene, session.viewMode);
    if (view.mode === "text") {
      const p = document.createElement("p");
      p.textContent = view.text;
      card.appendChild(p);
    } else {
      for (const row of view.rows) {
        const div = document.createElement("div");
        div.className = "action-row";
        for (const span of row.spans) {
          const tok = document.createElement("mark");
          tok.textContent = span.text;
          tok.style.background = TOKEN_COLORS[span.role];
          div.appendChild(tok);
        }
        div.onclick = () => void showSuggestions(scene.span.id, row.actionId);
        card.appendChild(div);
      }
    }
    host.appendChild(card);
  }
}

async function showSuggestions(sceneId: number, actionId: number): Promise<void> {
  if (!session.projectId) return;
  const resp = await api.suggestions(session.projectId, sceneId, actionId);
  const host = $("chips");
  host.replaceChildren();
  for (const chip of chipsFor(resp.suggestions)) {
    const button = document.createElement("button");
    button.textContent = `#${chip.rank} ${chip.label}`;
    button.onclick = async () => {
      const result = await applySuggestion(api, recorder, session, sceneId, resp.action, chip);
      session = result.session;
      clipCache.push({ id: result.clip.clip_id, label: result.clip.label });
      await refreshScene();
    };
    host.appendChild(button);
  }
}

async function refreshScene(): Promise<void> {
  const scene = currentScene();
  if (!session.projectId || !scene) return;
  if (scene.layout_saved) {
    const manifest = await api.frames(session.projectId, scene.span.id, 30);
    playback.load(manifest);
  }
  renderAnimationList();
  void renderElementEditor();
}

const CHARACTER_SLOTS = ["head", "body", "left_arm", "right_arm", "left_leg", "right_leg"];

/** Element editor: overview mode lists every entity; scene mode only
 * the selected scene's characters and items. Each slot is a picker over
 * the asset library; swaps go straight to the service. */
async function renderElementEditor(): Promise<void> {
  const host = $("editor");
  host.replaceChildren();
  if (!outline || !session.projectId) return;
  const { builtin } = await api.assets();
  const imageAssets = builtin.filter((a) => a.mime.startsWith("image/"));
  const entities = new Map<string, "character" | "item">();
  const scenes = session.editorMode === "scene"
    ? outline.scenes.filter((s) => s.span.id === session.selectedScene)
    : outline.scenes;
  for (const scene of scenes) {
    for (const c of scene.characters) entities.set(c.name, "character");
    for (const i of scene.items) {
      if (!entities.has(i.name)) entities.set(i.name, "item");
    }
  }
  const mode = document.createElement("p");
  mode.textContent = session.editorMode === "scene"
    ? `Scene mode: elements of scene ${session.selectedScene}`
    : "Overview mode: all story elements";
  host.appendChild(mode);
  for (const [name, kind] of entities) {
    const box = document.createElement("details");
    const title = document.createElement("summary");
    title.textContent = `${name} (${kind})`;
    box.appendChild(title);
    const variantTabs = document.createElement("div");
    variantTabs.textContent = "variant: default";
    box.appendChild(variantTabs);
    const slots = kind === "character" ? CHARACTER_SLOTS : ["sprite"];
    for (const slot of slots) {
      const row = document.createElement("label");
      row.style.display = "block";
      row.textContent = `${slot}: `;
      const picker = document.createElement("select");
      const blank = document.createElement("option");
      blank.value = "";
      blank.textContent = "(keep)";
      picker.appendChild(blank);
      for (const asset of imageAssets) {
        const option = document.createElement("option");
        option.value = asset.id;
        option.textContent = asset.id;
        picker.appendChild(option);
      }
      picker.onchange = async () => {
        if (!picker.value || !session.projectId) return;
        await swapSlotAsset(api, recorder, session.projectId, name, "default", slot, picker.value);
      };
      row.appendChild(picker);
      box.appendChild(row);
    }
    host.appendChild(box);
  }
}

function renderAnimationList(): void {
  const host = $("animations");
  host.replaceChildren();
  animationRows(clipCache).forEach((row, index) => {
    const li = document.createElement("li");
    li.textContent = `${row.order}. ${row.label}`;
    const up = document.createElement("button");
    up.textContent = "up";
    up.onclick = async () => {
      if (index === 0 || !session.projectId || session.selectedScene === null) return;
      const ids = clipCache.map((c) => c.id);
      await reorderAnimation(api, recorder, session.projectId, session.selectedScene, ids, index, index - 1);
      await refreshScene();
    };
    const del = document.createElement("button");
    del.textContent = "delete";
    del.onclick = async () => {
      if (!session.projectId || session.selectedScene === null) return;
      await deleteAnimation(api, recorder, session.projectId, session.selectedScene, row.clipId);
      clipCache = clipCache.filter((c) => c.id !== row.clipId);
      await refreshScene();
    };
    li.append(" ", up, " ", del);
    host.appendChild(li);
  });
}

function wireCanvasDrag(): void {
  canvas.addEventListener("pointerdown", (ev) => {
    const rect = canvas.getBoundingClientRect();
    pathRecorder.start(
      ((ev.clientX - rect.left) / rect.width) * CANVAS.width,
      ((ev.clientY - rect.top) / rect.height) * CANVAS.height,
    );
  });
  canvas.addEventListener("pointermove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    pathRecorder.move(
      ((ev.clientX - rect.left) / rect.width) * CANVAS.width,
      ((ev.clientY - rect.top) / rect.height) * CANVAS.height,
    );
  });
  canvas.addEventListener("pointerup", () => {
    session = setPendingPath(session, pathRecorder.finish());
    const hintEl = $("hint");
    hintEl.textContent = session.hint ?? "";
    playback.stop();
  });
}

async function boot(): Promise<void> {
  $("upload-form").onsubmit = async (ev) => {
    ev.preventDefault();
    const text = ($("story") as unknown as HTMLTextAreaElement).value;
    const created = await api.createProject(text);
    session = { ...initialSession(), projectId: created.project_id };
    outline = created;
    renderOutline();
  };
  $("toggle-view").onclick = () => {
    session = toggleView(session); // projection only; no request leaves here
    renderOutline();
  };
  $("play").onclick = () => {
    if (!playback.playable) return;
    playback.play();
    const timer = setInterval(() => {
      if (!playback.tick()) clearInterval(timer);
    }, 1000 / 30);
  };
  $("stop").onclick = () => void playback.stop();
  $("export").onclick = async () => {
    if (!session.projectId) return;
    const bytes = await api.exportProject(session.projectId);
    const blob = new Blob([bytes.slice() as unknown as BlobPart], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "motioncomic.json";
    a.click();
  };
  $("save-layout").onclick = async () => {
    const scene = currentScene();
    if (!session.projectId || !scene) return;
    const placements: PlacementSpec[] = scene.characters.concat(scene.items).map((e, i) => ({
      entity: e.name,
      x: 200 + i * 220,
      y: 620,
      z: i,
    }));
    await saveLayout(api, recorder, session.projectId, scene.span.id, placements);
    await chooseBackground(api, recorder, session.projectId, scene.span.id, "bg.kingdom");
    outline = await api.outline(session.projectId);
    await refreshScene();
  };
  wireCanvasDrag();
}

void boot();

export { api, overrideCategory, recorder, session };
