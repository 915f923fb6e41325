import { EngineApi } from './api';
import { ChunkPreview, JobStatus, SceneRecommendations, SceneSummary } from './types';

export interface BoardState {
  scenes: SceneSummary[];
  active: number;
  recommendations: Record<number, SceneRecommendations>;
  heatmaps: Record<number, ChunkPreview[]>;
  job: JobStatus | null;
  busy: boolean;
  error: string | null;
}

export function clampScene(position: number, count: number): number {
  if (count <= 0) return 0;
  return Math.min(Math.max(0, Math.round(position)), count - 1);
}

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Client state for the scene workbench. The server is the single source of
 * truth: every render follows a confirmed response, never an optimistic
 * local mutation, so a page reload reconstructs identical state.
 */
export class SceneBoard {
  state: BoardState = {
    scenes: [],
    active: 0,
    recommendations: {},
    heatmaps: {},
    job: null,
    busy: false,
    error: null,
  };

  private listeners: Array<(state: BoardState) => void> = [];

  constructor(
    private api: EngineApi,
    private pollDelayMs = 250,
    private delay: (ms: number) => Promise<void> = sleep,
  ) {}

  subscribe(listener: (state: BoardState) => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  get activeScene(): SceneSummary | undefined {
    return this.state.scenes[this.state.active];
  }

  async load(): Promise<void> {
    const scenes = await this.api.getScenes();
    const recommendations: Record<number, SceneRecommendations> = {};
    for (const scene of scenes) {
      recommendations[scene.id] = await this.api.getRecommendations(scene.id);
    }
    this.state = { ...this.state, scenes, recommendations, error: null };
    this.state.active = clampScene(this.state.active, scenes.length);
    await this.refreshHeatmaps();
    this.emit();
  }

  /** Slider movement; positions beyond the ends clamp. */
  setActive(position: number): void {
    this.state.active = clampScene(position, this.state.scenes.length);
    this.emit();
  }

  /**
   * One mutation in flight at a time; state updates only from the server's
   * confirmation. Selecting also refreshes the scene list so invalidated
   * generation state is reflected immediately.
   */
  async select(effects: string[], ambient: string): Promise<void> {
    const scene = this.activeScene;
    if (!scene || this.state.busy) return;
    this.state.busy = true;
    this.emit();
    try {
      await this.api.putSelection(scene.id, effects, ambient);
      this.state.scenes = await this.api.getScenes();
      this.state.recommendations[scene.id] = await this.api.getRecommendations(scene.id);
      delete this.state.heatmaps[scene.id];
      this.state.error = null;
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  /** True when the active scene has at least one effect selected. */
  get canGenerate(): boolean {
    return (
      this.state.scenes.length > 0 &&
      this.state.scenes.every((s) => s.selection.effects.length > 0) &&
      (this.state.job === null || ['done', 'error', 'cancelled'].includes(this.state.job.state))
    );
  }

  async generate(): Promise<JobStatus | null> {
    if (!this.canGenerate) return null;
    const { job_id } = await this.api.startGenerate();
    let status = await this.api.getJob(job_id);
    this.state.job = status;
    this.emit();
    while (status.state === 'queued' || status.state === 'running') {
      await this.delay(this.pollDelayMs);
      status = await this.api.getJob(job_id);
      this.state.job = status;
      this.emit();
    }
    if (status.state === 'done') {
      this.state.scenes = await this.api.getScenes();
      await this.refreshHeatmaps();
    } else if (status.error) {
      this.state.error = status.error;
    }
    this.emit();
    return status;
  }

  private async refreshHeatmaps(): Promise<void> {
    for (const scene of this.state.scenes) {
      if (scene.generated) {
        const { chunks } = await this.api.getHeatmaps(scene.id);
        this.state.heatmaps[scene.id] = chunks;
      } else {
        delete this.state.heatmaps[scene.id];
      }
    }
  }
}
