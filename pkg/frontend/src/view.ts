import type { StrokeStore } from './strokes.js';
import type { Point, RectSpec } from './types.js';
import type { Viewport } from './viewport.js';

/** The slice of CanvasRenderingContext2D the view needs; tests inject a
 * recording fake, production passes the real context. */
export interface Draw2D {
  canvas: { width: number; height: number };
  globalAlpha: number;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  lineCap: CanvasLineCap;
  lineJoin: CanvasLineJoin;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  drawImage(image: unknown, dx: number, dy: number, dw: number, dh: number): void;
  setLineDash(segments: number[]): void;
}

export interface Drawable {
  source: unknown;
  width: number;
  height: number;
}

export interface ViewState {
  image: Drawable | null;
  overlay: Drawable | null;
  overlayVisible: boolean;
  stampRect: RectSpec | null;      // stored stamp outline, source frame
  stampPreview: { at: Point; rect: RectSpec } | null;
}

function cssColor(rgb: [number, number, number]): string {
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}

export class CanvasView {
  constructor(
    private ctx: Draw2D,
    private viewport: Viewport,
  ) {}

  render(state: ViewState, strokes: StrokeStore): void {
    const { ctx, viewport } = this;
    ctx.globalAlpha = 1;
    ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
    if (!state.image) return;

    const origin = viewport.imageToScreen({ x: 0, y: 0 });
    const w = state.image.width * viewport.scale;
    const h = state.image.height * viewport.scale;
    ctx.drawImage(state.image.source, origin.x, origin.y, w, h);

    if (state.overlay && state.overlayVisible) {
      ctx.drawImage(state.overlay.source, origin.x, origin.y, w, h);
    }

    for (const layer of strokes.layers) {
      ctx.strokeStyle = cssColor(layer.color);
      ctx.fillStyle = cssColor(layer.color);
      ctx.lineWidth = strokes.brushWidth * viewport.scale;
      ctx.lineCap = 'round';
      ctx.lineJoin = 'round';
      for (const line of layer.polylines) {
        if (line.length === 1) {
          const p = viewport.imageToScreen(line[0]);
          ctx.beginPath();
          ctx.arc(p.x, p.y, Math.max(1, ctx.lineWidth / 2), 0, Math.PI * 2);
          ctx.fill();
          continue;
        }
        ctx.beginPath();
        const first = viewport.imageToScreen(line[0]);
        ctx.moveTo(first.x, first.y);
        for (const p of line.slice(1)) {
          const s = viewport.imageToScreen(p);
          ctx.lineTo(s.x, s.y);
        }
        ctx.stroke();
      }
    }

    if (state.stampRect) {
      this.outlineRect(state.stampRect, 'rgb(255, 255, 255)', [6, 4]);
    }
    if (state.stampPreview) {
      const r = state.stampPreview.rect;
      this.outlineRect(
        { x: state.stampPreview.at.x, y: state.stampPreview.at.y, width: r.width, height: r.height },
        'rgb(255, 220, 60)',
        [4, 4],
      );
    }
    ctx.setLineDash([]);
  }

  private outlineRect(rect: RectSpec, color: string, dash: number[]): void {
    const { ctx, viewport } = this;
    const tl = viewport.imageToScreen({ x: rect.x, y: rect.y });
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.5;
    ctx.setLineDash(dash);
    ctx.strokeRect(tl.x, tl.y, rect.width * viewport.scale, rect.height * viewport.scale);
  }
}
