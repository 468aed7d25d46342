import { ApiClient } from './api.js';
import { App, type AppDom } from './app.js';
import type { Drawable } from './view.js';

function grab<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

function loadImage(dataUrl: string): Promise<Drawable> {
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.onload = () =>
      resolve({ source: img, width: img.naturalWidth, height: img.naturalHeight });
    img.onerror = () => reject(new Error('image decode failed'));
    img.src = dataUrl;
  });
}

const dom: AppDom = {
  canvas: grab<HTMLCanvasElement>('canvas'),
  fileInput: grab<HTMLInputElement>('file-input'),
  alphaSlider: grab<HTMLInputElement>('alpha'),
  gammaSlider: grab<HTMLInputElement>('gamma'),
  opacitySlider: grab<HTMLInputElement>('opacity'),
  brushInput: grab<HTMLInputElement>('brush-width'),
  segmentButton: grab<HTMLButtonElement>('segment'),
  stampButton: grab<HTMLButtonElement>('make-stamp'),
  placeButton: grab<HTMLButtonElement>('place-stamp'),
  addLabelButton: grab<HTMLButtonElement>('add-label'),
  clearLabelButton: grab<HTMLButtonElement>('clear-label'),
  labelList: grab('label-list'),
  banner: grab('banner'),
  retryButton: grab<HTMLButtonElement>('retry'),
  status: grab('status'),
};

const ctx = dom.canvas.getContext('2d');
if (!ctx) throw new Error('canvas 2d context unavailable');

const baseUrl = (window as { ARGSEG_SERVICE?: string }).ARGSEG_SERVICE ?? 'http://127.0.0.1:8080';
new App({ dom, api: new ApiClient(baseUrl), ctx, loadImage });
