/** Typed client for the motioncomic service. Every displayed state in
 * the studio originates from one of these responses; the client holds
 * no animation math of its own. */

import type {
  ClipCreated,
  FrameManifest,
  OutlineResponse,
  PlacementSpec,
  SampleResponse,
  SuggestionsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail?: unknown,
  ) {
    super(message);
  }
}

async function decode<T>(resp: Response): Promise<T> {
  if (resp.ok) {
    return (await resp.json()) as T;
  }
  let code = "HttpError";
  let message = `${resp.status} ${resp.statusText}`;
  let detail: unknown;
  try {
    const body = (await resp.json()) as { code?: string; message?: string; detail?: unknown };
    code = body.code ?? code;
    message = body.message ?? message;
    detail = body.detail;
  } catch {
    /* non-JSON error body; keep the HTTP line */
  }
  throw new ApiError(resp.status, code, message, detail);
}

export class StudioApi {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.url(path), {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return decode<T>(resp);
  }

  createProject(storyText: string): Promise<OutlineResponse & { project_id: string }> {
    return this.send("POST", "/projects", { story_text: storyText });
  }

  outline(pid: string): Promise<OutlineResponse> {
    return this.send("GET", `/projects/${pid}/outline`);
  }

  reclassify(pid: string, scene: number, action: number, category: string) {
    return this.send<{ revision: number; action: unknown }>(
      "PATCH", `/projects/${pid}/scenes/${scene}/actions/${action}`, { category },
    );
  }

  suggestions(pid: string, scene: number, action: number): Promise<SuggestionsResponse> {
    return this.send("GET", `/projects/${pid}/scenes/${scene}/actions/${action}/suggestions`);
  }

  putLayout(pid: string, scene: number, placements: PlacementSpec[]) {
    return this.send<{ revision: number; saved: boolean }>(
      "PUT", `/projects/${pid}/scenes/${scene}/layout`, { placements },
    );
  }

  setBackground(pid: string, scene: number, asset: string | null) {
    return this.send<{ revision: number }>(
      "PUT", `/projects/${pid}/scenes/${scene}/background`, { asset },
    );
  }

  setBgm(pid: string, scene: number, asset: string | null, startOffset = 0) {
    return this.send<{ revision: number }>(
      "PUT", `/projects/${pid}/scenes/${scene}/bgm`, { asset, start_offset: startOffset },
    );
  }

  setSlot(pid: string, entity: string, body: Record<string, unknown>) {
    return this.send<{ revision: number; prototype: unknown }>(
      "PUT", `/projects/${pid}/prototypes/${encodeURIComponent(entity)}/slots`, body,
    );
  }

  addClip(pid: string, scene: number, templateId: string, actionId: number | null,
          params: Record<string, unknown>): Promise<ClipCreated> {
    return this.send("POST", `/projects/${pid}/scenes/${scene}/timeline/clips`, {
      template_id: templateId,
      action_id: actionId,
      params,
    });
  }

  deleteClip(pid: string, scene: number, clipId: string) {
    return this.send<{ revision: number }>(
      "DELETE", `/projects/${pid}/scenes/${scene}/timeline/clips/${clipId}`,
    );
  }

  reorderClips(pid: string, scene: number, order: string[]) {
    return this.send<{ revision: number; order: string[] }>(
      "PUT", `/projects/${pid}/scenes/${scene}/timeline/order`, { order },
    );
  }

  sample(pid: string, scene: number, t: number): Promise<SampleResponse> {
    return this.send("GET", `/projects/${pid}/scenes/${scene}/sample?t=${t}`);
  }

  frames(pid: string, scene: number, fps: number): Promise<FrameManifest> {
    return this.send("GET", `/projects/${pid}/scenes/${scene}/frames?fps=${fps}`);
  }

  async exportProject(pid: string): Promise<Uint8Array> {
    const resp = await fetch(this.url(`/projects/${pid}/export`), { method: "POST" });
    if (!resp.ok) {
      await decode(resp); // throws ApiError
    }
    return new Uint8Array(await resp.arrayBuffer());
  }

  designSpace(): Promise<{ templates: unknown[]; frequency_table: Record<string, Record<string, number>> }> {
    return this.send("GET", "/design-space");
  }

  assets(): Promise<{ builtin: { id: string; path: string; mime: string }[]; uploads: unknown[] }> {
    return this.send("GET", "/assets");
  }
}
