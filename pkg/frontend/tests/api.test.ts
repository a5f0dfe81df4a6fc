import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { TessellateClient, TessellateResult } from "../src/api.js";
import { SceneJson } from "../src/state.js";

function scene(seed: number): SceneJson {
  return {
    group: "p2",
    scale: 1,
    strokes: [{ kind: "polyline", points: [[0.6, 0.55], [0.8, 0.7]] }],
    cells: [2, 2],
    resolution: 128,
    seed,
  };
}

function okResponse(body: unknown, delayMs: number, signal?: AbortSignal | null): Promise<Response> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => {
      resolve(
        new Response(JSON.stringify(body), {
          status: 200,
          headers: { "content-type": "application/json" },
        }),
      );
    }, delayMs);
    signal?.addEventListener("abort", () => {
      clearTimeout(timer);
      const err = new Error("aborted");
      err.name = "AbortError";
      reject(err);
    });
  });
}

function resultBody(tag: number): TessellateResult {
  return {
    png_base64: `img${tag}`,
    svg: "<svg/>",
    arcs: [],
    cells: [],
    congruence: {},
    straightness: {},
    equidistance_px: 0.5,
    timing_ms: 1,
  };
}

describe("TessellateClient", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces rapid edits into one request", async () => {
    const calls: string[] = [];
    const fetchFn = vi.fn((url: string, init?: RequestInit) => {
      calls.push(String(init?.body));
      return okResponse(resultBody(calls.length), 5, init?.signal);
    });
    const client = new TessellateClient("", fetchFn as never, 150);
    const got: TessellateResult[] = [];
    client.onResult = (r) => got.push(r);

    client.schedule(scene(1));
    await vi.advanceTimersByTimeAsync(100);
    client.schedule(scene(2));
    await vi.advanceTimersByTimeAsync(100);
    client.schedule(scene(3));
    await vi.advanceTimersByTimeAsync(300);

    expect(fetchFn).toHaveBeenCalledTimes(1);
    expect(JSON.parse(calls[0]).seed).toBe(3);
    expect(got).toHaveLength(1);
  });

  it("immediate dispatch skips the debounce timer", async () => {
    const fetchFn = vi.fn((_url: string, init?: RequestInit) =>
      okResponse(resultBody(1), 5, init?.signal),
    );
    const client = new TessellateClient("", fetchFn as never, 150);
    client.schedule(scene(1), true);
    expect(fetchFn).toHaveBeenCalledTimes(1);
    await vi.advanceTimersByTimeAsync(10);
    expect(client.applied).toBe(1);
  });

  it("a newer edit cancels the stale in-flight request", async () => {
    const fetchFn = vi.fn((_url: string, init?: RequestInit) => {
      const n = fetchFn.mock.calls.length;
      // first request is slow, second fast
      return okResponse(resultBody(n), n === 1 ? 500 : 10, init?.signal);
    });
    const client = new TessellateClient("", fetchFn as never, 150);
    const got: string[] = [];
    client.onResult = (r) => got.push(r.png_base64);

    client.schedule(scene(1), true);
    await vi.advanceTimersByTimeAsync(50);
    client.schedule(scene(2), true);
    await vi.advanceTimersByTimeAsync(1000);

    expect(fetchFn).toHaveBeenCalledTimes(2);
    expect(got).toEqual(["img2"]);
  });

  it("drops a stale response that loses the race without abort support", async () => {
    // fetch mock ignores the abort signal entirely: the old response still
    // resolves, but the sequence check discards it
    const fetchFn = vi.fn((_url: string, _init?: RequestInit) => {
      const n = fetchFn.mock.calls.length;
      return okResponse(resultBody(n), n === 1 ? 500 : 10, null);
    });
    const client = new TessellateClient("", fetchFn as never, 150);
    const got: string[] = [];
    client.onResult = (r) => got.push(r.png_base64);

    client.schedule(scene(1), true);
    await vi.advanceTimersByTimeAsync(50);
    client.schedule(scene(2), true);
    await vi.advanceTimersByTimeAsync(1000);

    expect(got).toEqual(["img2"]);
  });

  it("reports service errors with field and stage", async () => {
    const fetchFn = vi.fn(() =>
      Promise.resolve(
        new Response(JSON.stringify({ error: "stroke 0 is not simple", stage: "sites" }), {
          status: 422,
        }),
      ),
    );
    const client = new TessellateClient("", fetchFn as never, 150);
    const errors: unknown[] = [];
    client.onError = (e) => errors.push(e);
    client.schedule(scene(1), true);
    await vi.advanceTimersByTimeAsync(10);
    expect(errors).toEqual([
      { status: 422, error: "stroke 0 is not simple", field: undefined, stage: "sites" },
    ]);
  });
});
