// Editor state and its lossless mapping to the scene-file wire format.
// All tessellation math lives in the service; this module only shapes data.

export type StrokeKind = "polyline" | "catmullrom" | "hermite" | "bezier";
export type Parameterization = "uniform" | "centripetal";

export interface StrokeState {
  kind: StrokeKind;
  points: Array<[number, number]>;
  /** hermite only: exactly two tangent vectors */
  tangents: Array<[number, number]>;
  /** catmullrom only */
  parameterization: Parameterization;
  /** curve kinds only */
  flattenLevels: number;
}

export interface DisplayToggles {
  sites: boolean;
  boundaries: boolean;
  orbitColors: boolean;
}

export interface EditorState {
  group: string;
  scale: number;
  resolution: number;
  seed: number;
  cells: [number, number];
  strokes: StrokeState[];
  display: DisplayToggles;
}

export interface SceneStrokeJson {
  kind: StrokeKind;
  points: Array<[number, number]>;
  tangents?: Array<[number, number]>;
  parameterization?: Parameterization;
  flatten_levels?: number;
}

export interface SceneJson {
  group: string;
  scale: number;
  strokes: SceneStrokeJson[];
  cells: [number, number];
  resolution: number;
  seed: number;
}

export interface GroupMeta {
  name: string;
  family: "square" | "hex";
  order: number;
  has_reflection: boolean;
  curved_capable: boolean;
}

export const DEFAULT_FLATTEN_LEVELS = 4;

export function newStroke(kind: StrokeKind = "catmullrom"): StrokeState {
  return {
    kind,
    points: [],
    tangents: [],
    parameterization: "uniform",
    flattenLevels: DEFAULT_FLATTEN_LEVELS,
  };
}

export function initialState(): EditorState {
  return {
    group: "p3",
    scale: 1.0,
    resolution: 512,
    seed: 7,
    cells: [2, 2],
    strokes: [],
    display: { sites: true, boundaries: true, orbitColors: false },
  };
}

/** World rectangle the stroke editor shows: one lattice cell. */
export function editView(state: EditorState, meta: GroupMeta | null): {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
} {
  const s = state.scale;
  if (meta && meta.family === "hex") {
    return { x0: 0, y0: 0, x1: 1.5 * s, y1: (Math.sqrt(3) / 2) * s };
  }
  return { x0: 0, y0: 0, x1: s, y1: s };
}

export function clampToView(
  p: [number, number],
  view: { x0: number; y0: number; x1: number; y1: number },
): [number, number] {
  return [
    Math.min(view.x1, Math.max(view.x0, p[0])),
    Math.min(view.y1, Math.max(view.y0, p[1])),
  ];
}

export function toSceneFile(state: EditorState): SceneJson {
  const strokes: SceneStrokeJson[] = state.strokes
    .filter((s) => s.points.length >= (s.kind === "polyline" ? 1 : 2))
    .map((s) => {
      const out: SceneStrokeJson = {
        kind: s.kind,
        points: s.points.map((p) => [p[0], p[1]]),
      };
      if (s.kind === "hermite") {
        out.tangents = s.tangents.map((t) => [t[0], t[1]]);
      }
      if (s.kind === "catmullrom") {
        out.parameterization = s.parameterization;
      }
      if (s.kind !== "polyline") {
        out.flatten_levels = s.flattenLevels;
      }
      return out;
    });
  return {
    group: state.group,
    scale: state.scale,
    strokes,
    cells: [state.cells[0], state.cells[1]],
    resolution: state.resolution,
    seed: state.seed,
  };
}

export function fromSceneFile(scene: SceneJson, display?: DisplayToggles): EditorState {
  return {
    group: scene.group,
    scale: scene.scale,
    resolution: scene.resolution,
    seed: scene.seed,
    cells: [scene.cells[0], scene.cells[1]],
    strokes: scene.strokes.map((s) => ({
      kind: s.kind,
      points: s.points.map((p) => [p[0], p[1]] as [number, number]),
      tangents: (s.tangents ?? []).map((t) => [t[0], t[1]] as [number, number]),
      parameterization: s.parameterization ?? "uniform",
      flattenLevels: s.flatten_levels ?? DEFAULT_FLATTEN_LEVELS,
    })),
    display: display ?? { sites: true, boundaries: true, orbitColors: false },
  };
}

/** Degeneracy note shown before the user draws anything. */
export function mirrorWarning(meta: GroupMeta | null): string | null {
  if (!meta || !meta.has_reflection) {
    return null;
  }
  const fixed: Record<string, string> = {
    p4m: "right isosceles triangles",
    pmm: "squares",
    p3m1: "equilateral triangles",
    p6m: "30-60-90 triangles",
  };
  if (meta.name in fixed) {
    return (
      `${meta.name} contains mirrors: boundaries on mirror axes stay straight, ` +
      `and every drawing produces the same ${fixed[meta.name]}.`
    );
  }
  return `${meta.name} contains mirrors: boundaries on mirror axes stay straight.`;
}

/** Stroke index named in a service error, for inline highlighting. */
export function strokeIndexFromError(message: string): number | null {
  const m = /stroke (\d+)/.exec(message);
  return m ? Number(m[1]) : null;
}
