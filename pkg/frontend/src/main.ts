import { ApiClient } from './api';
import { formatGain, formatPan, gridToRgba, isSilent, panIndicatorX } from './heatmap';
import { SceneBoard } from './state';
import { ChunkPreview, Recommendation } from './types';

const api = new ApiClient();
const board = new SceneBoard(api);

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const slider = $<HTMLInputElement>('scene-slider');
const sceneLabel = $('scene-label');
const sceneStrip = $('scene-strip');
const effectsList = $('effects-list');
const ambientSelect = $<HTMLSelectElement>('ambient-select');
const ambientPreview = $<HTMLAudioElement>('ambient-preview');
const generateButton = $<HTMLButtonElement>('generate-button');
const jobLabel = $('job-label');
const timeline = $('heatmap-timeline');
const mixPreview = $<HTMLAudioElement>('mix-preview');
const exportLink = $<HTMLAnchorElement>('export-link');
const errorBanner = $('error-banner');

slider.addEventListener('input', () => board.setActive(Number(slider.value)));
generateButton.addEventListener('click', () => {
  void board.generate();
});
exportLink.href = api.exportUrl();

function renderSceneStrip(): void {
  sceneStrip.replaceChildren(
    ...board.state.scenes.map((scene, i) => {
      const block = document.createElement('button');
      block.className = 'scene-block' + (i === board.state.active ? ' active' : '');
      block.textContent = `#${scene.id} · ${scene.time_range[0].toFixed(1)}–${scene.time_range[1].toFixed(1)}s`;
      block.title = scene.generated ? 'generated' : 'not generated';
      block.addEventListener('click', () => board.setActive(i));
      return block;
    }),
  );
}

function effectRow(rec: Recommendation, selected: string[]): HTMLElement {
  const row = document.createElement('label');
  row.className = 'effect-row';
  const box = document.createElement('input');
  box.type = 'checkbox';
  box.value = rec.label_id;
  box.checked = selected.includes(rec.label_id);
  box.addEventListener('change', () => {
    const scene = board.activeScene;
    if (!scene) return;
    const current = new Set(scene.selection.effects);
    if (box.checked) current.add(rec.label_id);
    else current.delete(rec.label_id);
    void board.select([...current], scene.selection.ambient);
  });
  const name = document.createElement('span');
  name.textContent = `${rec.label_id} (${rec.score.toFixed(3)})`;
  const audio = document.createElement('audio');
  audio.controls = true;
  audio.preload = 'none';
  audio.src = api.clipPreviewUrl(rec.label_id);
  row.append(box, name, audio);
  return row;
}

function renderPanels(): void {
  const scene = board.activeScene;
  if (!scene) return;
  const recs = board.state.recommendations[scene.id];
  if (!recs) return;

  // effects multi-select, descending score; rank-1 arrives pre-selected
  effectsList.replaceChildren(...recs.effects.map((r) => effectRow(r, scene.selection.effects)));
  if (scene.selection.effects.length === 0) {
    const warning = document.createElement('p');
    warning.className = 'warning';
    warning.textContent = 'No effects selected: generation is disabled for this scene.';
    effectsList.append(warning);
  }

  ambientSelect.replaceChildren(
    ...recs.ambients.map((r) => {
      const option = document.createElement('option');
      option.value = r.label_id;
      option.textContent = `${r.label_id} (${r.score.toFixed(3)})`;
      option.selected = r.label_id === scene.selection.ambient;
      return option;
    }),
  );
  const ambientUrl = api.clipPreviewUrl(scene.selection.ambient);
  if (ambientPreview.getAttribute('src') !== ambientUrl) {
    ambientPreview.src = ambientUrl; // only on change, or playback restarts
  }
}

ambientSelect.addEventListener('change', () => {
  const scene = board.activeScene;
  if (scene) void board.select(scene.selection.effects, ambientSelect.value);
});

function chunkCard(preview: ChunkPreview): HTMLElement {
  const card = document.createElement('div');
  card.className = 'chunk-card';
  const canvas = document.createElement('canvas');
  canvas.width = preview.heatmap.w;
  canvas.height = preview.heatmap.h;
  canvas.className = 'chunk-heatmap';
  if (!isSilent(preview.heatmap)) {
    const ctx = canvas.getContext('2d');
    if (ctx) {
      const image = new ImageData(gridToRgba(preview.heatmap), preview.heatmap.w, preview.heatmap.h);
      ctx.putImageData(image, 0, 0);
    }
  }
  const meta = document.createElement('div');
  meta.className = 'chunk-meta';
  meta.textContent =
    `${preview.label_id} · ${preview.time_range[0].toFixed(1)}–${preview.time_range[1].toFixed(1)}s · ` +
    `pan ${formatPan(preview.pan)} · gain ${formatGain(preview.gain)}`;
  const bar = document.createElement('div');
  bar.className = 'pan-bar';
  const dot = document.createElement('div');
  dot.className = 'pan-dot';
  dot.style.left = `${panIndicatorX(preview.pan, 100)}%`;
  bar.append(dot);
  card.append(canvas, meta, bar);
  return card;
}

let lastPreviewKey = '';

function renderTimeline(): void {
  const scene = board.activeScene;
  if (!scene) return;
  const chunks = board.state.heatmaps[scene.id];
  if (!scene.generated || !chunks) {
    timeline.replaceChildren(
      Object.assign(document.createElement('p'), {
        className: 'empty',
        textContent: 'Generate to see per-chunk pan and gain predictions.',
      }),
    );
    mixPreview.removeAttribute('src');
    lastPreviewKey = '';
    return;
  }
  timeline.replaceChildren(...chunks.map((c) => chunkCard(c)));
  const previewKey = `${scene.id}:${board.state.job?.id ?? ''}`;
  if (previewKey !== lastPreviewKey) {
    // cache-bust per (scene, generation) so regenerated audio is refetched,
    // but leave src alone across unrelated re-renders to keep playback alive
    mixPreview.src = api.scenePreviewUrl(scene.id, encodeURIComponent(previewKey));
    lastPreviewKey = previewKey;
  }
}

board.subscribe((state) => {
  slider.max = String(Math.max(0, state.scenes.length - 1));
  slider.value = String(state.active);
  sceneLabel.textContent = state.scenes.length
    ? `Scene ${state.active + 1} of ${state.scenes.length}`
    : 'No scenes';
  generateButton.disabled = !board.canGenerate || state.busy;
  if (state.job) {
    const { scene, total_scenes, stage } = state.job.progress;
    jobLabel.textContent =
      state.job.state === 'running' || state.job.state === 'queued'
        ? `Generating: scene ${Math.min(scene + 1, total_scenes)} of ${total_scenes} — ${stage}`
        : `Generation ${state.job.state}`;
  } else {
    jobLabel.textContent = '';
  }
  errorBanner.textContent = state.error ?? '';
  errorBanner.style.display = state.error ? 'block' : 'none';
  renderSceneStrip();
  renderPanels();
  renderTimeline();
});

void board.load().catch((err) => {
  errorBanner.textContent = `Failed to load project: ${err}`;
  errorBanner.style.display = 'block';
});
