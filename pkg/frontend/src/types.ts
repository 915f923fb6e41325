export interface SceneSummary {
  id: number;
  frame_range: [number, number];
  time_range: [number, number];
  generated: boolean;
  selection: { effects: string[]; ambient: string };
}

export interface Recommendation {
  label_id: string;
  score: number;
  rank: number;
}

export interface SceneRecommendations {
  effects: Recommendation[];
  ambients: Recommendation[];
  ambients_visual: Recommendation[];
}

export interface HeatmapGrid {
  w: number;
  h: number;
  values: number[];
}

export interface ChunkPreview {
  label_id: string;
  time_range: [number, number];
  reference_frame: number;
  pan: number;
  gain: number;
  heatmap: HeatmapGrid;
}

export interface JobStatus {
  id: string;
  state: 'queued' | 'running' | 'done' | 'error' | 'cancelled';
  progress: { scene: number; total_scenes: number; stage: string };
  error: string | null;
}
