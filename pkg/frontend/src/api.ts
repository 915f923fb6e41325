import { ChunkPreview, JobStatus, SceneRecommendations, SceneSummary } from './types';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

/** What the UI needs from the engine; ApiClient is the HTTP implementation. */
export interface EngineApi {
  getScenes(): Promise<SceneSummary[]>;
  getRecommendations(sceneId: number): Promise<SceneRecommendations>;
  putSelection(
    sceneId: number,
    effects: string[],
    ambient: string,
  ): Promise<{ effects: string[]; ambient: string; generated: boolean }>;
  startGenerate(): Promise<{ job_id: string }>;
  getJob(jobId: string): Promise<JobStatus>;
  getHeatmaps(sceneId: number): Promise<{ chunks: ChunkPreview[] }>;
}

/** Thin typed wrapper over the engine's JSON API. */
export class ApiClient implements EngineApi {
  constructor(
    private baseUrl = '',
    private fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === 'string') detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return response.json() as Promise<T>;
  }

  getScenes(): Promise<SceneSummary[]> {
    return this.request('/api/scenes');
  }

  getRecommendations(sceneId: number): Promise<SceneRecommendations> {
    return this.request(`/api/scenes/${sceneId}/recommendations`);
  }

  putSelection(
    sceneId: number,
    effects: string[],
    ambient: string,
  ): Promise<{ effects: string[]; ambient: string; generated: boolean }> {
    return this.request(`/api/scenes/${sceneId}/selection`, {
      method: 'PUT',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ effects, ambient }),
    });
  }

  startGenerate(): Promise<{ job_id: string }> {
    return this.request('/api/generate', { method: 'POST' });
  }

  getJob(jobId: string): Promise<JobStatus> {
    return this.request(`/api/jobs/${jobId}`);
  }

  getHeatmaps(sceneId: number): Promise<{ chunks: ChunkPreview[] }> {
    return this.request(`/api/scenes/${sceneId}/heatmaps`);
  }

  clipPreviewUrl(labelId: string): string {
    return `${this.baseUrl}/api/clips/${labelId}/preview.wav`;
  }

  scenePreviewUrl(sceneId: number, cacheBust = ''): string {
    const suffix = cacheBust ? `?v=${cacheBust}` : '';
    return `${this.baseUrl}/api/scenes/${sceneId}/preview.wav${suffix}`;
  }

  exportUrl(): string {
    return `${this.baseUrl}/api/export.zip`;
  }
}
