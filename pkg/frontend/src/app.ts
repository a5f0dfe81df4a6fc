// The designer: stroke editing on the left, live tessellation preview on
// the right. Every edit serializes the state to a scene file and posts it
// to the service (debounced while dragging, immediate on release).

import { TessellateClient, TessellateResult } from "./api.js";
import {
  EditorState,
  GroupMeta,
  SceneJson,
  StrokeKind,
  clampToView,
  editView,
  fromSceneFile,
  initialState,
  mirrorWarning,
  newStroke,
  strokeIndexFromError,
  toSceneFile,
} from "./state.js";

const EDIT_SIZE = 380;
const ORBIT_HUES = [210, 25, 130, 60, 290, 170, 330, 90];

export class DesignerApp {
  state: EditorState = initialState();
  groups: GroupMeta[] = [];
  activeStroke = -1;
  errorStroke: number | null = null;
  lastResult: TessellateResult | null = null;

  private editCanvas!: HTMLCanvasElement;
  private previewImg!: HTMLImageElement;
  private overlay!: HTMLCanvasElement;
  private groupSelect!: HTMLSelectElement;
  private warningBadge!: HTMLElement;
  private metaPanel!: HTMLElement;
  private statusLine!: HTMLElement;
  private strokeList!: HTMLElement;
  private dragging: { stroke: number; point: number } | null = null;

  constructor(
    private root: HTMLElement,
    private client: TessellateClient,
  ) {
    this.client.onResult = (r) => this.applyResult(r);
    this.client.onError = (e) => {
      this.errorStroke = strokeIndexFromError(e.error);
      this.setStatus(
        `error${e.stage ? ` [${e.stage}]` : ""}: ${e.error}`,
        true,
      );
      this.drawEditor();
    };
  }

  async start(): Promise<void> {
    this.groups = await this.client.groups();
    this.buildDom();
    this.onGroupChanged();
    this.drawEditor();
  }

  private groupMeta(): GroupMeta | null {
    return this.groups.find((g) => g.name === this.state.group) ?? null;
  }

  // ---- DOM scaffolding ----------------------------------------------------

  private buildDom(): void {
    this.root.innerHTML = "";
    const title = document.createElement("h1");
    title.textContent = "curvetile designer";
    this.root.appendChild(title);

    const columns = el("div", "columns");
    this.root.appendChild(columns);

    // controls
    const controls = el("div", "panel controls");
    columns.appendChild(controls);

    controls.appendChild(label("symmetry group"));
    this.groupSelect = document.createElement("select");
    for (const g of this.groups) {
      const opt = document.createElement("option");
      opt.value = g.name;
      opt.textContent = `${g.name} (${g.family}, order ${g.order})`;
      this.groupSelect.appendChild(opt);
    }
    this.groupSelect.value = this.state.group;
    this.groupSelect.addEventListener("change", () => {
      this.state.group = this.groupSelect.value;
      this.onGroupChanged();
      this.requestRender(true);
    });
    controls.appendChild(this.groupSelect);

    this.warningBadge = el("div", "warning");
    controls.appendChild(this.warningBadge);
    this.metaPanel = el("div", "meta");
    controls.appendChild(this.metaPanel);

    controls.appendChild(label("resolution"));
    const res = document.createElement("select");
    for (const r of [256, 512, 1024]) {
      const opt = document.createElement("option");
      opt.value = String(r);
      opt.textContent = `${r}`;
      res.appendChild(opt);
    }
    res.value = String(this.state.resolution);
    res.addEventListener("change", () => {
      this.state.resolution = Number(res.value);
      this.requestRender(true);
    });
    controls.appendChild(res);

    controls.appendChild(label("strokes"));
    this.strokeList = el("div", "strokes");
    controls.appendChild(this.strokeList);
    const addBtn = button("new stroke", () => {
      this.state.strokes.push(newStroke());
      this.activeStroke = this.state.strokes.length - 1;
      this.refreshStrokeList();
      this.drawEditor();
    });
    controls.appendChild(addBtn);

    controls.appendChild(label("display"));
    controls.appendChild(
      checkbox("boundaries", this.state.display.boundaries, (v) => {
        this.state.display.boundaries = v;
        this.drawOverlay();
      }),
    );
    controls.appendChild(
      checkbox("orbit colors", this.state.display.orbitColors, (v) => {
        this.state.display.orbitColors = v;
        this.drawOverlay();
      }),
    );
    controls.appendChild(
      checkbox("stroke markers", this.state.display.sites, (v) => {
        this.state.display.sites = v;
        this.drawEditor();
      }),
    );

    controls.appendChild(label("export"));
    const exports = el("div", "exports");
    exports.appendChild(button("PNG", () => this.exportPng()));
    exports.appendChild(button("SVG", () => this.exportSvg()));
    exports.appendChild(button("scene", () => this.exportScene()));
    controls.appendChild(exports);

    // editor canvas
    const editPanel = el("div", "panel");
    editPanel.appendChild(label("fundamental domain (click to add points, drag to move)"));
    this.editCanvas = document.createElement("canvas");
    this.editCanvas.width = EDIT_SIZE;
    this.editCanvas.height = EDIT_SIZE;
    this.editCanvas.className = "editor";
    editPanel.appendChild(this.editCanvas);
    columns.appendChild(editPanel);

    // preview
    const previewPanel = el("div", "panel preview");
    previewPanel.appendChild(label("tessellation"));
    const stack = el("div", "stack");
    this.previewImg = document.createElement("img");
    this.previewImg.alt = "tessellation preview";
    this.overlay = document.createElement("canvas");
    stack.appendChild(this.previewImg);
    stack.appendChild(this.overlay);
    previewPanel.appendChild(stack);
    this.statusLine = el("div", "status");
    previewPanel.appendChild(this.statusLine);
    columns.appendChild(previewPanel);

    this.bindEditorEvents();
    this.refreshStrokeList();
  }

  private onGroupChanged(): void {
    const meta = this.groupMeta();
    const warning = mirrorWarning(meta);
    this.warningBadge.textContent = warning ?? "";
    this.warningBadge.style.display = warning ? "block" : "none";
    if (meta) {
      this.metaPanel.textContent = meta.curved_capable
        ? "curved-capable: boundaries can bend"
        : "not curved-capable";
    }
    this.drawEditor();
  }

  // ---- stroke editing -----------------------------------------------------

  private bindEditorEvents(): void {
    const toWorld = (ev: PointerEvent): [number, number] => {
      const rect = this.editCanvas.getBoundingClientRect();
      const view = editView(this.state, this.groupMeta());
      const sx = (view.x1 - view.x0) / rect.width;
      const sy = (view.y1 - view.y0) / rect.height;
      return [
        view.x0 + (ev.clientX - rect.left) * sx,
        view.y1 - (ev.clientY - rect.top) * sy,
      ];
    };

    this.editCanvas.addEventListener("pointerdown", (ev) => {
      const w = toWorld(ev);
      const hit = this.hitPoint(w);
      if (hit) {
        this.dragging = hit;
        this.editCanvas.setPointerCapture(ev.pointerId);
        return;
      }
      if (this.activeStroke < 0) {
        this.state.strokes.push(newStroke());
        this.activeStroke = this.state.strokes.length - 1;
        this.refreshStrokeList();
      }
      const view = editView(this.state, this.groupMeta());
      this.state.strokes[this.activeStroke].points.push(clampToView(w, view));
      this.errorStroke = null;
      this.drawEditor();
      this.requestRender(true);
    });

    this.editCanvas.addEventListener("pointermove", (ev) => {
      if (!this.dragging) {
        return;
      }
      const view = editView(this.state, this.groupMeta());
      const w = clampToView(toWorld(ev), view);
      this.state.strokes[this.dragging.stroke].points[this.dragging.point] = w;
      this.drawEditor();
      this.requestRender(false); // debounced while dragging
    });

    this.editCanvas.addEventListener("pointerup", () => {
      if (this.dragging) {
        this.dragging = null;
        this.requestRender(true); // immediate on release
      }
    });
  }

  private hitPoint(w: [number, number]): { stroke: number; point: number } | null {
    const view = editView(this.state, this.groupMeta());
    const tol = (view.x1 - view.x0) * 0.02;
    for (let si = 0; si < this.state.strokes.length; si++) {
      const pts = this.state.strokes[si].points;
      for (let pi = 0; pi < pts.length; pi++) {
        if (Math.hypot(pts[pi][0] - w[0], pts[pi][1] - w[1]) <= tol) {
          this.activeStroke = si;
          return { stroke: si, point: pi };
        }
      }
    }
    return null;
  }

  private refreshStrokeList(): void {
    this.strokeList.innerHTML = "";
    this.state.strokes.forEach((s, i) => {
      const row = el("div", "stroke-row" + (i === this.activeStroke ? " active" : ""));
      const pick = button(`#${i} (${s.points.length} pts)`, () => {
        this.activeStroke = i;
        this.refreshStrokeList();
        this.drawEditor();
      });
      row.appendChild(pick);
      const kind = document.createElement("select");
      for (const k of ["catmullrom", "polyline", "hermite"] as StrokeKind[]) {
        const opt = document.createElement("option");
        opt.value = k;
        opt.textContent = k;
        kind.appendChild(opt);
      }
      kind.value = s.kind;
      kind.addEventListener("change", () => {
        s.kind = kind.value as StrokeKind;
        if (s.kind === "hermite") {
          s.points = s.points.slice(0, 2);
          while (s.tangents.length < 2) {
            s.tangents.push([0.1, 0.1]);
          }
        }
        this.drawEditor();
        this.requestRender(true);
      });
      row.appendChild(kind);
      row.appendChild(
        button("x", () => {
          this.state.strokes.splice(i, 1);
          this.activeStroke = this.state.strokes.length - 1;
          this.refreshStrokeList();
          this.drawEditor();
          this.requestRender(true);
        }),
      );
      this.strokeList.appendChild(row);
    });
  }

  private drawEditor(): void {
    if (!this.editCanvas) {
      return;
    }
    const ctx = this.editCanvas.getContext("2d")!;
    const view = editView(this.state, this.groupMeta());
    const w = this.editCanvas.width;
    const h = this.editCanvas.height;
    const toX = (x: number) => ((x - view.x0) / (view.x1 - view.x0)) * w;
    const toY = (y: number) => h - ((y - view.y0) / (view.y1 - view.y0)) * h;
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = "#fafafa";
    ctx.fillRect(0, 0, w, h);
    ctx.strokeStyle = "#ccc";
    ctx.strokeRect(0.5, 0.5, w - 1, h - 1);

    this.state.strokes.forEach((s, i) => {
      const bad = this.errorStroke === i;
      ctx.strokeStyle = bad ? "#d22" : i === this.activeStroke ? "#06c" : "#888";
      ctx.lineWidth = bad ? 3 : 2;
      ctx.beginPath();
      s.points.forEach(([x, y], pi) => {
        if (pi === 0) {
          ctx.moveTo(toX(x), toY(y));
        } else {
          ctx.lineTo(toX(x), toY(y));
        }
      });
      ctx.stroke();
      if (this.state.display.sites) {
        ctx.fillStyle = ctx.strokeStyle;
        for (const [x, y] of s.points) {
          ctx.beginPath();
          ctx.arc(toX(x), toY(y), 4, 0, 2 * Math.PI);
          ctx.fill();
        }
      }
    });
  }

  // ---- preview ------------------------------------------------------------

  requestRender(immediate: boolean): void {
    const scene = toSceneFile(this.state);
    if (scene.strokes.length === 0) {
      this.setStatus("draw a stroke to tessellate", false);
      return;
    }
    this.client.schedule(scene, immediate);
  }

  private applyResult(r: TessellateResult): void {
    this.lastResult = r;
    this.errorStroke = null;
    this.previewImg.src = `data:image/png;base64,${r.png_base64}`;
    this.previewImg.onload = () => this.drawOverlay();
    this.setStatus(
      `${r.arcs.length} arcs, ${r.cells.length} cells, ${r.timing_ms.toFixed(0)} ms`,
      false,
    );
    this.drawEditor();
  }

  private drawOverlay(): void {
    if (!this.lastResult || !this.previewImg.naturalWidth) {
      return;
    }
    const img = this.previewImg;
    this.overlay.width = img.naturalWidth;
    this.overlay.height = img.naturalHeight;
    const ctx = this.overlay.getContext("2d")!;
    ctx.clearRect(0, 0, this.overlay.width, this.overlay.height);
    const win = this.sceneWindow();
    const step = (win.x1 - win.x0) / img.naturalWidth;
    const toX = (x: number) => (x - win.x0) / step;
    const toY = (y: number) => img.naturalHeight - (y - win.y0) / step;

    if (this.state.display.orbitColors) {
      for (const cell of this.lastResult.cells) {
        ctx.fillStyle = `hsla(${ORBIT_HUES[cell.orbit % ORBIT_HUES.length]}, 70%, 50%, 0.35)`;
        ctx.beginPath();
        cell.polygon.forEach(([x, y], i) => {
          if (i === 0) {
            ctx.moveTo(toX(x), toY(y));
          } else {
            ctx.lineTo(toX(x), toY(y));
          }
        });
        ctx.closePath();
        ctx.fill();
      }
    }
    if (this.state.display.boundaries) {
      ctx.strokeStyle = "rgba(20,20,20,0.9)";
      ctx.lineWidth = 1;
      for (const arc of this.lastResult.arcs) {
        ctx.beginPath();
        arc.points.forEach(([x, y], i) => {
          if (i === 0) {
            ctx.moveTo(toX(x), toY(y));
          } else {
            ctx.lineTo(toX(x), toY(y));
          }
        });
        ctx.stroke();
      }
    }
  }

  private sceneWindow(): { x0: number; y0: number; x1: number; y1: number } {
    const meta = this.groupMeta();
    const [m, n] = this.state.cells;
    const s = this.state.scale;
    if (meta && meta.family === "hex") {
      return { x0: 0, y0: 0, x1: m * s + (n * s) / 2, y1: n * s * (Math.sqrt(3) / 2) };
    }
    return { x0: 0, y0: 0, x1: m * s, y1: n * s };
  }

  // ---- exports ------------------------------------------------------------

  private exportPng(): void {
    if (this.lastResult) {
      download(
        `data:image/png;base64,${this.lastResult.png_base64}`,
        "tiling.png",
      );
    }
  }

  private exportSvg(): void {
    if (this.lastResult) {
      const blob = new Blob([this.lastResult.svg], { type: "image/svg+xml" });
      download(URL.createObjectURL(blob), "tiling.svg");
    }
  }

  private exportScene(): void {
    const blob = new Blob([JSON.stringify(toSceneFile(this.state), null, 2)], {
      type: "application/json",
    });
    download(URL.createObjectURL(blob), "scene.json");
  }

  /** Load a previously exported scene (round-trips losslessly). */
  loadScene(scene: SceneJson): void {
    this.state = fromSceneFile(scene, this.state.display);
    this.activeStroke = this.state.strokes.length - 1;
    if (this.groupSelect) {
      this.groupSelect.value = this.state.group;
      this.onGroupChanged();
      this.refreshStrokeList();
    }
    this.requestRender(true);
  }

  private setStatus(text: string, isError: boolean): void {
    if (this.statusLine) {
      this.statusLine.textContent = text;
      this.statusLine.className = isError ? "status error" : "status";
    }
  }
}

// small DOM helpers, same flavor as the rest of the file
function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

function label(text: string): HTMLElement {
  const node = el("div", "label");
  node.textContent = text;
  return node;
}

function button(text: string, onClick: () => void): HTMLButtonElement {
  const b = document.createElement("button");
  b.textContent = text;
  b.addEventListener("click", onClick);
  return b;
}

function checkbox(text: string, value: boolean, onChange: (v: boolean) => void): HTMLElement {
  const wrap = el("label", "check");
  const box = document.createElement("input");
  box.type = "checkbox";
  box.checked = value;
  box.addEventListener("change", () => onChange(box.checked));
  wrap.appendChild(box);
  wrap.appendChild(document.createTextNode(` ${text}`));
  return wrap;
}

function download(href: string, name: string): void {
  const a = document.createElement("a");
  a.href = href;
  a.download = name;
  a.click();
}
