import type { Point } from './types.js';

/**
 * Zoom and pan between screen (canvas) coordinates and image pixels.
 * screen = image * scale + offset.  The transform is view-only: stored
 * stroke coordinates always live in image space.
 */
export class Viewport {
  scale = 1;
  offsetX = 0;
  offsetY = 0;

  screenToImage(p: Point): Point {
    return { x: (p.x - this.offsetX) / this.scale, y: (p.y - this.offsetY) / this.scale };
  }

  imageToScreen(p: Point): Point {
    return { x: p.x * this.scale + this.offsetX, y: p.y * this.scale + this.offsetY };
  }

  /** Zoom by a factor keeping the given screen point fixed. */
  zoomAt(screen: Point, factor: number): void {
    const next = Math.min(32, Math.max(1 / 32, this.scale * factor));
    const applied = next / this.scale;
    this.offsetX = screen.x - (screen.x - this.offsetX) * applied;
    this.offsetY = screen.y - (screen.y - this.offsetY) * applied;
    this.scale = next;
  }

  panBy(dx: number, dy: number): void {
    this.offsetX += dx;
    this.offsetY += dy;
  }

  reset(): void {
    this.scale = 1;
    this.offsetX = 0;
    this.offsetY = 0;
  }
}
