import type { ModelPack, SegmentResponse, SessionInfo, StrokeFile } from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class NetworkError extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Client for the segmentation session service.  Segment and apply calls
 * are funneled through a per-client queue so at most one is in flight;
 * later clicks wait behind the current request.
 */
export class ApiClient {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { 'content-type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new NetworkError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        const data = (await response.json()) as { error?: string };
        if (data.error) message = data.error;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, message);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  /** Serialize segment/apply traffic: one in-flight request at a time. */
  private enqueue<T>(job: () => Promise<T>): Promise<T> {
    const next = this.queue.then(job, job);
    this.queue = next.catch(() => undefined);
    return next;
  }

  createSession(imageBase64: string): Promise<SessionInfo> {
    return this.request('POST', '/sessions', { image: imageBase64 });
  }

  segment(
    sessionId: string,
    strokes: StrokeFile,
    alpha: number,
    gamma: number,
    opacity: number,
  ): Promise<SegmentResponse> {
    return this.enqueue(() =>
      this.request('POST', `/sessions/${sessionId}/segment`, {
        strokes,
        alpha,
        gamma,
        opacity,
      }),
    );
  }

  makeStamp(
    sessionId: string,
    strokes: StrokeFile,
    alpha: number,
    gamma: number,
  ): Promise<{ model_pack: ModelPack }> {
    return this.request('POST', `/sessions/${sessionId}/stamp`, {
      strokes,
      alpha,
      gamma,
    });
  }

  applyStamp(
    sessionId: string,
    pack: ModelPack,
    at: { x: number; y: number },
    opacity: number,
  ): Promise<SegmentResponse> {
    return this.enqueue(() =>
      this.request('POST', `/sessions/${sessionId}/apply`, {
        model_pack: pack,
        at,
        opacity,
      }),
    );
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request('DELETE', `/sessions/${sessionId}`);
  }
}
