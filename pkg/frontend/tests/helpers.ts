import { ApiClient } from '../src/api.js';
import type { AppDom } from '../src/app.js';
import type { Draw2D, Drawable } from '../src/view.js';
import { validateStrokeFile } from '../src/strokes.js';
import type { ModelPack } from '../src/types.js';

export interface RecordedCall {
  op: string;
  args: unknown[];
}

export function makeRecorder(): Draw2D & { calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const record =
    (op: string) =>
    (...args: unknown[]) => {
      calls.push({ op, args });
    };
  return {
    calls,
    canvas: { width: 960, height: 720 },
    globalAlpha: 1,
    strokeStyle: '',
    fillStyle: '',
    lineWidth: 1,
    lineCap: 'butt',
    lineJoin: 'miter',
    clearRect: record('clearRect'),
    fillRect: record('fillRect'),
    strokeRect: record('strokeRect'),
    beginPath: record('beginPath'),
    moveTo: record('moveTo'),
    lineTo: record('lineTo'),
    arc: record('arc'),
    fill: record('fill'),
    stroke: record('stroke'),
    drawImage: record('drawImage'),
    setLineDash: record('setLineDash'),
  };
}

export function fakeLoadImage(dataUrl: string): Promise<Drawable> {
  return Promise.resolve({ source: { dataUrl }, width: 64, height: 48 });
}

export function makeDom(): AppDom {
  const el = <T extends HTMLElement>(tag: string): T =>
    document.createElement(tag) as T;
  const slider = (value: string): HTMLInputElement => {
    const input = el<HTMLInputElement>('input');
    input.type = 'range';
    input.min = '0';
    input.max = '1';
    input.step = '0.01';
    input.value = value;
    return input;
  };
  const canvas = el<HTMLCanvasElement>('canvas');
  canvas.width = 960;
  canvas.height = 720;
  const brush = el<HTMLInputElement>('input');
  brush.type = 'number';
  brush.value = '3';
  const dom: AppDom = {
    canvas,
    fileInput: el<HTMLInputElement>('input'),
    alphaSlider: slider('0.5'),
    gammaSlider: slider('0.5'),
    opacitySlider: slider('0.5'),
    brushInput: brush,
    segmentButton: el<HTMLButtonElement>('button'),
    stampButton: el<HTMLButtonElement>('button'),
    placeButton: el<HTMLButtonElement>('button'),
    addLabelButton: el<HTMLButtonElement>('button'),
    clearLabelButton: el<HTMLButtonElement>('button'),
    labelList: el('div'),
    banner: el('div'),
    retryButton: el<HTMLButtonElement>('button'),
    status: el('div'),
  };
  dom.fileInput.type = 'file';
  for (const node of Object.values(dom)) document.body.appendChild(node as Node);
  return dom;
}

export interface MockBackend {
  fetch: (url: string, init?: RequestInit) => Promise<Response>;
  requests: Array<{ method: string; path: string; body: unknown }>;
  failNextWith?: Error;
}

const OVERLAY_B64 = 'T1ZFUkxBWQ==';
const LABELS_B64 = 'TEFCRUxT';

function pack(): ModelPack {
  return {
    version: 1,
    rect: { x: 4, y: 6, width: 20, height: 10 },
    d_max: Math.hypot(20, 10),
    label_table: { '0': [230, 60, 50] },
    vertices: [{ id: 0, mu: [0.5, 0.5, 0.5], centroid: [1, 1], pixel_count: 9, label: 0 }],
    edges: [],
    params_default: { alpha: 0.5, gamma_e: 0.5 },
  };
}

/** In-memory stand-in for the session service, faithful to its status
 * codes and body shapes. */
export function makeBackend(): MockBackend {
  let nextSession = 0;
  const sessions = new Set<string>();
  const requests: MockBackend['requests'] = [];
  const json = (status: number, body: unknown) =>
    new Response(JSON.stringify(body), { status });

  const backend: MockBackend = {
    requests,
    async fetch(url: string, init?: RequestInit): Promise<Response> {
      if (backend.failNextWith) {
        const err = backend.failNextWith;
        backend.failNextWith = undefined;
        throw err;
      }
      const method = init?.method ?? 'GET';
      const path = url.replace(/^https?:\/\/[^/]+/, '');
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      requests.push({ method, path, body });

      if (method === 'POST' && path === '/sessions') {
        if (typeof body?.image !== 'string' || body.image.length === 0) {
          return json(400, { error: 'image: expected base64 PNG string' });
        }
        const sid = `session-${nextSession++}`;
        sessions.add(sid);
        return json(201, { session_id: sid, width: 64, height: 48, region_count: 12 });
      }

      const match = path.match(/^\/sessions\/([^/]+)(?:\/(\w+))?$/);
      if (!match) return json(404, { error: 'no such route' });
      const [, sid, action] = match;
      if (!sessions.has(sid)) return json(404, { error: `unknown session ${sid}` });

      if (method === 'DELETE' && !action) {
        sessions.delete(sid);
        return new Response(null, { status: 204 });
      }
      if (method === 'POST' && (action === 'segment' || action === 'stamp')) {
        if (!validateStrokeFile(body?.strokes)) {
          return json(400, { error: 'strokes: malformed stroke file' });
        }
        if (typeof body.alpha !== 'number' || body.alpha < 0 || body.alpha > 1) {
          return json(400, { error: `alpha: must be a number within [0, 1], got ${body.alpha}` });
        }
        if (body.strokes.labels.length === 0) {
          return json(422, { error: 'strokes: no stroke pixel lands on the image' });
        }
        if (action === 'stamp') return json(200, { model_pack: pack() });
        return json(200, {
          label_map: LABELS_B64,
          overlay: OVERLAY_B64,
          regions: { '0': { label: 0, cost: 0.0 } },
          timing_ms: 4.2,
        });
      }
      if (method === 'POST' && action === 'apply') {
        if (!body?.model_pack) return json(400, { error: 'model_pack: missing' });
        const at = body.at;
        if (typeof at?.x !== 'number' || typeof at?.y !== 'number') {
          return json(400, { error: `at: expected {x, y} integers, got ${JSON.stringify(at)}` });
        }
        return json(200, {
          label_map: LABELS_B64,
          overlay: OVERLAY_B64,
          regions: { '0': { label: 0, cost: 0.1 } },
          timing_ms: 3.1,
        });
      }
      return json(404, { error: 'no such route' });
    },
  };
  return backend;
}

export function makeClient(backend: MockBackend): ApiClient {
  return new ApiClient('http://svc', (url, init) => backend.fetch(url, init));
}

export function pointerEvent(
  type: string,
  x: number,
  y: number,
  extra: MouseEventInit = {},
): MouseEvent {
  return new MouseEvent(type, { clientX: x, clientY: y, bubbles: true, ...extra });
}
