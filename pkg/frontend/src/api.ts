// Debounced, cancellable client for the tessellation service.
// One request in flight at a time; stale responses are dropped by
// sequence number so a slow old answer can never overwrite a newer one.

import type { GroupMeta, SceneJson } from "./state.js";

export interface ArcJson {
  left: number;
  right: number;
  closed: boolean;
  straightness: number;
  points: Array<[number, number]>;
}

export interface CellJson {
  instance: number;
  orbit: number;
  polygon: Array<[number, number]>;
}

export interface TessellateResult {
  png_base64: string;
  svg: string;
  arcs: ArcJson[];
  cells: CellJson[];
  congruence: Record<string, unknown>;
  straightness: Record<string, unknown>;
  equidistance_px: number;
  timing_ms: number;
}

export interface ServiceError {
  status: number;
  error: string;
  field?: string | null;
  stage?: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class TessellateClient {
  private seq = 0;
  private appliedSeq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;

  onResult: (result: TessellateResult) => void = () => {};
  onError: (err: ServiceError) => void = () => {};

  constructor(
    private base: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
    private debounceMs = 150,
  ) {}

  async groups(): Promise<GroupMeta[]> {
    const r = await this.fetchFn(`${this.base}/api/groups`);
    if (!r.ok) {
      throw new Error(`groups endpoint failed: ${r.status}`);
    }
    return (await r.json()) as GroupMeta[];
  }

  /** Queue a tessellation; pointer-move edits debounce, pointer-up goes now. */
  schedule(scene: SceneJson, immediate = false): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    if (immediate) {
      void this.dispatch(scene);
    } else {
      this.timer = setTimeout(() => {
        this.timer = null;
        void this.dispatch(scene);
      }, this.debounceMs);
    }
  }

  /** Sequence number of the last applied response (for tests). */
  get applied(): number {
    return this.appliedSeq;
  }

  private async dispatch(scene: SceneJson): Promise<void> {
    const mySeq = ++this.seq;
    if (this.controller) {
      this.controller.abort();
    }
    const controller = new AbortController();
    this.controller = controller;
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}/api/tessellate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(scene),
        signal: controller.signal,
      });
    } catch (err) {
      if ((err as Error).name === "AbortError" || mySeq !== this.seq) {
        return; // superseded
      }
      this.onError({ status: 0, error: String(err) });
      return;
    }
    if (mySeq !== this.seq) {
      return; // a newer edit was dispatched while we waited
    }
    if (!response.ok) {
      const body = (await response.json().catch(() => ({ error: response.statusText }))) as {
        error?: string;
        field?: string | null;
        stage?: string;
      };
      this.onError({
        status: response.status,
        error: body.error ?? response.statusText,
        field: body.field,
        stage: body.stage,
      });
      return;
    }
    const result = (await response.json()) as TessellateResult;
    if (mySeq !== this.seq || mySeq <= this.appliedSeq) {
      return;
    }
    this.appliedSeq = mySeq;
    this.onResult(result);
  }
}
