export interface Point {
  x: number;
  y: number;
}

export interface RectSpec {
  x: number;
  y: number;
  width: number;
  height: number;
}

// Stroke file schema shared with the segmentation service.
export interface StrokeFileLabel {
  id: number;
  color: [number, number, number];
  polylines: number[][][];
}

export interface StrokeFile {
  version: number;
  brush_width: number;
  labels: StrokeFileLabel[];
}

export interface ModelPackVertex {
  id: number;
  mu: number[];
  centroid: number[];
  pixel_count: number;
  label: number | null;
}

export interface ModelPackEdge {
  from: number;
  to: number;
  nu: number[];
}

export interface ModelPack {
  version: number;
  rect: RectSpec;
  d_max: number;
  label_table: Record<string, number[]>;
  vertices: ModelPackVertex[];
  edges: ModelPackEdge[];
  params_default: { alpha: number; gamma_e: number };
}

export interface SessionInfo {
  session_id: string;
  width: number;
  height: number;
  region_count: number;
}

export interface RegionResult {
  label: number;
  cost: number;
}

export interface SegmentResponse {
  label_map: string;
  overlay: string;
  regions: Record<string, RegionResult>;
  timing_ms: number;
}
