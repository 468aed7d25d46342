import type { Point, StrokeFile } from './types.js';

export interface StrokeLayer {
  labelId: number;
  color: [number, number, number];
  polylines: Point[][];
}

const PALETTE: [number, number, number][] = [
  [230, 60, 50],
  [60, 180, 75],
  [55, 100, 235],
  [245, 190, 30],
  [145, 60, 220],
  [60, 200, 210],
  [240, 120, 180],
  [130, 130, 40],
];

/**
 * Stroke layers in image pixel space.  Coordinates never depend on the
 * current zoom or pan; the viewport converts before points get here.
 */
export class StrokeStore {
  layers: StrokeLayer[] = [];
  activeLabel = 0;
  brushWidth = 3;
  private current: Point[] | null = null;

  constructor() {
    this.addLayer();
  }

  addLayer(): StrokeLayer {
    const id = this.layers.length;
    const layer: StrokeLayer = {
      labelId: id,
      color: PALETTE[id % PALETTE.length],
      polylines: [],
    };
    this.layers.push(layer);
    this.activeLabel = id;
    return layer;
  }

  layer(labelId: number): StrokeLayer {
    const found = this.layers.find((l) => l.labelId === labelId);
    if (!found) throw new Error(`no stroke layer for label ${labelId}`);
    return found;
  }

  beginStroke(p: Point): void {
    this.current = [{ x: p.x, y: p.y }];
    this.layer(this.activeLabel).polylines.push(this.current);
  }

  extendStroke(p: Point): void {
    if (!this.current) return;
    this.current.push({ x: p.x, y: p.y });
  }

  endStroke(): void {
    this.current = null;
  }

  get drawing(): boolean {
    return this.current !== null;
  }

  clearLayer(labelId: number): void {
    this.layer(labelId).polylines = [];
  }

  hasStrokes(): boolean {
    return this.layers.some((l) => l.polylines.length > 0);
  }

  labelTable(): Record<string, [number, number, number]> {
    const table: Record<string, [number, number, number]> = {};
    for (const layer of this.layers) table[String(layer.labelId)] = layer.color;
    return table;
  }

  toStrokeFile(): StrokeFile {
    return {
      version: 1,
      brush_width: this.brushWidth,
      labels: this.layers
        .filter((l) => l.polylines.length > 0)
        .map((l) => ({
          id: l.labelId,
          color: l.color,
          polylines: l.polylines.map((line) => line.map((p) => [p.x, p.y])),
        })),
    };
  }
}

/** Structural check against the service's stroke file schema. */
export function validateStrokeFile(data: unknown): data is StrokeFile {
  if (typeof data !== 'object' || data === null) return false;
  const file = data as Record<string, unknown>;
  if (file.version !== 1) return false;
  if (typeof file.brush_width !== 'number' || file.brush_width < 1) return false;
  if (!Array.isArray(file.labels)) return false;
  const seenIds = new Set<number>();
  for (const entry of file.labels) {
    if (typeof entry !== 'object' || entry === null) return false;
    const label = entry as Record<string, unknown>;
    if (typeof label.id !== 'number' || label.id < 0 || label.id > 65534) return false;
    if (seenIds.has(label.id)) return false;
    seenIds.add(label.id);
    const color = label.color;
    if (!Array.isArray(color) || color.length !== 3) return false;
    if (!color.every((c) => typeof c === 'number' && c >= 0 && c <= 255)) return false;
    if (!Array.isArray(label.polylines)) return false;
    for (const line of label.polylines) {
      if (!Array.isArray(line) || line.length < 1) return false;
      for (const point of line) {
        if (!Array.isArray(point) || point.length !== 2) return false;
        if (!point.every((v) => typeof v === 'number' && Number.isFinite(v))) return false;
      }
    }
  }
  return true;
}
