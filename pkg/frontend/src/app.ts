import { ApiClient, ApiError, NetworkError } from './api.js';
import { StrokeStore } from './strokes.js';
import { CanvasView, type Draw2D, type Drawable } from './view.js';
import { Viewport } from './viewport.js';
import type { ModelPack, Point } from './types.js';

export interface AppDom {
  canvas: HTMLCanvasElement;
  fileInput: HTMLInputElement;
  alphaSlider: HTMLInputElement;
  gammaSlider: HTMLInputElement;
  opacitySlider: HTMLInputElement;
  brushInput: HTMLInputElement;
  segmentButton: HTMLButtonElement;
  stampButton: HTMLButtonElement;
  placeButton: HTMLButtonElement;
  addLabelButton: HTMLButtonElement;
  clearLabelButton: HTMLButtonElement;
  labelList: HTMLElement;
  banner: HTMLElement;
  retryButton: HTMLButtonElement;
  status: HTMLElement;
}

export interface AppDeps {
  dom: AppDom;
  api: ApiClient;
  ctx: Draw2D;
  /** Decode a data URL into something drawImage accepts. */
  loadImage: (dataUrl: string) => Promise<Drawable>;
}

type Mode = 'draw' | 'place-stamp';

export class App {
  readonly strokes = new StrokeStore();
  readonly viewport = new Viewport();
  sessionId: string | null = null;
  imageSize: { width: number; height: number } | null = null;
  mode: Mode = 'draw';
  stamp: ModelPack | null = null;
  stampFromCurrentSession = false;
  stampPreviewAt: Point | null = null;
  lastError: string | null = null;

  private image: Drawable | null = null;
  private overlay: Drawable | null = null;
  private view: CanvasView;
  private retryAction: (() => Promise<void>) | null = null;
  private panning: { lastX: number; lastY: number } | null = null;

  constructor(private deps: AppDeps) {
    this.view = new CanvasView(deps.ctx, this.viewport);
    this.bind();
    this.refreshLabelList();
    this.render();
  }

  // -- parameters ----------------------------------------------------

  get alpha(): number {
    return Number(this.deps.dom.alphaSlider.value);
  }

  get gamma(): number {
    return Number(this.deps.dom.gammaSlider.value);
  }

  get opacity(): number {
    return Number(this.deps.dom.opacitySlider.value);
  }

  // -- wiring --------------------------------------------------------

  private bind(): void {
    const { dom } = this.deps;
    dom.fileInput.addEventListener('change', () => {
      const file = dom.fileInput.files?.[0];
      if (file) void this.loadImageFile(file);
    });
    dom.segmentButton.addEventListener('click', () => void this.segment());
    dom.stampButton.addEventListener('click', () => void this.makeStamp());
    dom.placeButton.addEventListener('click', () => {
      if (this.stamp) this.setMode(this.mode === 'place-stamp' ? 'draw' : 'place-stamp');
    });
    dom.addLabelButton.addEventListener('click', () => {
      this.strokes.addLayer();
      this.refreshLabelList();
    });
    dom.clearLabelButton.addEventListener('click', () => {
      this.strokes.clearLayer(this.strokes.activeLabel);
      this.render();
    });
    dom.brushInput.addEventListener('change', () => {
      const width = Math.max(1, Math.round(Number(dom.brushInput.value)));
      this.strokes.brushWidth = width;
    });
    for (const slider of [dom.alphaSlider, dom.gammaSlider, dom.opacitySlider]) {
      slider.addEventListener('input', () => this.render());
    }
    dom.retryButton.addEventListener('click', () => {
      const action = this.retryAction;
      this.clearBanner();
      if (action) void action();
    });

    dom.canvas.addEventListener('pointerdown', (ev) => this.onPointerDown(ev));
    dom.canvas.addEventListener('pointermove', (ev) => this.onPointerMove(ev));
    dom.canvas.addEventListener('pointerup', (ev) => this.onPointerUp(ev));
    dom.canvas.addEventListener('wheel', (ev) => {
      ev.preventDefault();
      const factor = ev.deltaY < 0 ? 1.2 : 1 / 1.2;
      this.viewport.zoomAt(this.canvasPoint(ev), factor);
      this.render();
    });
  }

  private canvasPoint(ev: { clientX: number; clientY: number }): Point {
    const rect = this.deps.dom.canvas.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  }

  private imagePoint(ev: { clientX: number; clientY: number }): Point {
    return this.viewport.screenToImage(this.canvasPoint(ev));
  }

  // -- pointer handling ----------------------------------------------

  private onPointerDown(ev: PointerEvent | MouseEvent): void {
    if (!this.sessionId) return;
    if ('button' in ev && ev.button === 1) {
      this.panning = { lastX: ev.clientX, lastY: ev.clientY };
      return;
    }
    if (this.mode === 'place-stamp') {
      void this.placeStampAt(this.snappedPlacement(this.imagePoint(ev)));
      return;
    }
    this.strokes.beginStroke(this.imagePoint(ev));
    this.render();
  }

  private onPointerMove(ev: PointerEvent | MouseEvent): void {
    if (this.panning) {
      this.viewport.panBy(ev.clientX - this.panning.lastX, ev.clientY - this.panning.lastY);
      this.panning = { lastX: ev.clientX, lastY: ev.clientY };
      this.render();
      return;
    }
    if (this.mode === 'place-stamp') {
      this.stampPreviewAt = this.snappedPlacement(this.imagePoint(ev));
      this.render();
      return;
    }
    if (this.strokes.drawing) {
      this.strokes.extendStroke(this.imagePoint(ev));
      this.render();
    }
  }

  private onPointerUp(_ev: PointerEvent | MouseEvent): void {
    this.panning = null;
    if (this.strokes.drawing) {
      this.strokes.endStroke();
      this.render();
    }
  }

  /** Stamp placements snap to whole pixels. */
  private snappedPlacement(p: Point): Point {
    return { x: Math.round(p.x), y: Math.round(p.y) };
  }

  placementIntersectsImage(at: Point): boolean {
    if (!this.stamp || !this.imageSize) return false;
    const r = this.stamp.rect;
    return (
      at.x < this.imageSize.width &&
      at.y < this.imageSize.height &&
      at.x + r.width > 0 &&
      at.y + r.height > 0
    );
  }

  // -- actions -------------------------------------------------------

  async loadImageFile(file: Blob): Promise<void> {
    const dataUrl = await new Promise<string>((resolve, reject) => {
      const reader = new FileReader();
      reader.onload = () => resolve(reader.result as string);
      reader.onerror = () => reject(reader.error);
      reader.readAsDataURL(file);
    });
    await this.loadImageFromDataUrl(dataUrl);
  }

  async loadImageFromDataUrl(dataUrl: string): Promise<void> {
    const base64 = dataUrl.slice(dataUrl.indexOf(',') + 1);
    await this.guard(async () => {
      const info = await this.deps.api.createSession(base64);
      this.sessionId = info.session_id;
      this.imageSize = { width: info.width, height: info.height };
      this.image = await this.deps.loadImage(dataUrl);
      this.overlay = null;
      this.stampFromCurrentSession = false;
      this.viewport.reset();
      this.setStatus(
        `session ${info.session_id.slice(0, 8)}: ${info.width}x${info.height}, ` +
          `${info.region_count} regions`,
      );
      this.render();
    }, () => this.loadImageFromDataUrl(dataUrl));
  }

  async segment(): Promise<void> {
    if (!this.sessionId) {
      this.showBanner('load an image first', null);
      return;
    }
    if (!this.strokes.hasStrokes()) {
      this.showBanner('draw strokes on the image before segmenting', null);
      return;
    }
    const sid = this.sessionId;
    await this.guard(async () => {
      const response = await this.deps.api.segment(
        sid,
        this.strokes.toStrokeFile(),
        this.alpha,
        this.gamma,
        this.opacity,
      );
      this.overlay = await this.deps.loadImage(`data:image/png;base64,${response.overlay}`);
      this.setStatus(`segmented in ${response.timing_ms.toFixed(0)} ms`);
      this.render();
    }, () => this.segment());
  }

  async makeStamp(): Promise<void> {
    if (!this.sessionId) {
      this.showBanner('load an image first', null);
      return;
    }
    if (!this.strokes.hasStrokes()) {
      this.showBanner('draw strokes on the image before stamping', null);
      return;
    }
    const sid = this.sessionId;
    await this.guard(async () => {
      const response = await this.deps.api.makeStamp(
        sid,
        this.strokes.toStrokeFile(),
        this.alpha,
        this.gamma,
      );
      this.stamp = response.model_pack;
      this.stampFromCurrentSession = true;
      this.setStatus(
        `stamp stored: ${this.stamp.rect.width}x${this.stamp.rect.height} rect, ` +
          `${this.stamp.vertices.length} vertices`,
      );
      this.render();
    }, () => this.makeStamp());
  }

  async placeStampAt(at: Point): Promise<void> {
    if (!this.stamp || !this.sessionId) return;
    if (!this.placementIntersectsImage(at)) {
      this.showBanner('stamp placement is outside the image', null);
      return;
    }
    const sid = this.sessionId;
    const pack = this.stamp;
    await this.guard(async () => {
      const response = await this.deps.api.applyStamp(sid, pack, at, this.opacity);
      this.overlay = await this.deps.loadImage(`data:image/png;base64,${response.overlay}`);
      this.stampPreviewAt = null;
      this.setMode('draw');
      this.setStatus(`stamp applied in ${response.timing_ms.toFixed(0)} ms`);
      this.render();
    }, () => this.placeStampAt(at));
  }

  // -- error surface ---------------------------------------------------

  /** Run an action; surface service errors verbatim, keep state, and
   * offer a retry for network failures. */
  private async guard(action: () => Promise<void>, retry: (() => Promise<void>) | null): Promise<void> {
    try {
      this.clearBanner();
      await action();
    } catch (err) {
      if (err instanceof NetworkError) {
        this.showBanner(`network failure, nothing lost: ${err.message}`, retry);
      } else if (err instanceof ApiError && err.status === 422) {
        this.showBanner(`${err.message} (draw strokes over the image, then retry)`, null);
      } else if (err instanceof ApiError) {
        this.showBanner(err.message, null);
      } else {
        this.showBanner(String(err), null);
      }
    }
  }

  private showBanner(message: string, retry: (() => Promise<void>) | null): void {
    this.lastError = message;
    this.retryAction = retry;
    this.deps.dom.banner.textContent = message;
    this.deps.dom.banner.hidden = false;
    this.deps.dom.retryButton.hidden = retry === null;
  }

  private clearBanner(): void {
    this.lastError = null;
    this.retryAction = null;
    this.deps.dom.banner.textContent = '';
    this.deps.dom.banner.hidden = true;
    this.deps.dom.retryButton.hidden = true;
  }

  private setStatus(text: string): void {
    this.deps.dom.status.textContent = text;
  }

  setMode(mode: Mode): void {
    this.mode = mode;
    if (mode === 'draw') this.stampPreviewAt = null;
    this.deps.dom.placeButton.textContent =
      mode === 'place-stamp' ? 'Cancel placement' : 'Place stamp';
    this.render();
  }

  setActiveLabel(labelId: number): void {
    this.strokes.activeLabel = labelId;
    this.refreshLabelList();
  }

  private refreshLabelList(): void {
    const { labelList } = this.deps.dom;
    labelList.textContent = '';
    for (const layer of this.strokes.layers) {
      const item = labelList.ownerDocument.createElement('button');
      item.type = 'button';
      item.dataset.labelId = String(layer.labelId);
      item.textContent = `label ${layer.labelId}`;
      item.style.borderColor = `rgb(${layer.color.join(',')})`;
      if (layer.labelId === this.strokes.activeLabel) item.classList.add('active');
      item.addEventListener('click', () => this.setActiveLabel(layer.labelId));
      labelList.appendChild(item);
    }
  }

  render(): void {
    this.view.render(
      {
        image: this.image,
        overlay: this.overlay,
        overlayVisible: this.opacity > 0,
        stampRect: this.stamp && this.stampFromCurrentSession ? this.stamp.rect : null,
        stampPreview:
          this.mode === 'place-stamp' && this.stampPreviewAt && this.stamp
            ? { at: this.stampPreviewAt, rect: this.stamp.rect }
            : null,
      },
      this.strokes,
    );
  }

  get hasOverlay(): boolean {
    return this.overlay !== null;
  }
}
