import { ApiClient, ApiError } from "./api.js";
import { computeChartGeometry, nearestLine, paintChart, type ChartGeometry } from "./chart.js";
import { DragController, validateConfig, type ConfigState } from "./controls.js";
import { hidePopup, renderPopup } from "./popup.js";
import {
  computeScene,
  defaultViewport,
  hitTest,
  panBy,
  zoomAt,
  type Scene,
  type Viewport,
} from "./scene.js";
import { paint } from "./renderer.js";
import { AUTOPLAY_DWELL_MS, PHASE_MS, ViewModel } from "./viewmodel.js";

const api = new ApiClient("");
const vm = new ViewModel();

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const canvas = el<HTMLCanvasElement>("graph-canvas");
const chartCanvas = el<HTMLCanvasElement>("chart-canvas");
const ctx = canvas.getContext("2d")!;
const chartCtx = chartCanvas.getContext("2d")!;
const statusLine = el<HTMLElement>("status");
const popup = el<HTMLElement>("popup");

let viewport: Viewport = defaultViewport(canvas.width, canvas.height);
let scene: Scene = { edges: [], nodes: [] };
let chartGeometry: ChartGeometry | null = null;
let hoveredSeries: string | null = null;
let stepTimer: number | null = null;
let autoplayTimer: number | null = null;
const drag = new DragController(api, vm);

function redraw(): void {
  scene = computeScene(vm, viewport);
  if (hoveredSeries) {
    for (const node of scene.nodes) {
      if (node.id === hoveredSeries) node.highlighted = true;
    }
  }
  paint(ctx, scene, canvas.width, canvas.height);
}

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function configState(): ConfigState {
  const limitRaw = el<HTMLInputElement>("limit").value.trim();
  const offsetRaw = el<HTMLInputElement>("offset").value.trim();
  return {
    x: el<HTMLSelectElement>("x-select").value,
    y: el<HTMLSelectElement>("y-select").value,
    year: Number(el<HTMLInputElement>("year-input").value),
    layout: (document.querySelector('input[name="layout"]:checked') as HTMLInputElement).value,
    limit: limitRaw === "" ? null : Number(limitRaw),
    offset: offsetRaw === "" ? null : Number(offsetRaw),
    seed: Number(el<HTMLInputElement>("seed").value || "0"),
  };
}

function refreshValidation(): void {
  const problems = validateConfig(configState());
  el<HTMLButtonElement>("apply").disabled = problems.length > 0;
  el<HTMLElement>("config-error").textContent = problems.map((p) => p.message).join("; ");
}

function stopStepPolling(): void {
  if (stepTimer !== null) {
    window.clearTimeout(stepTimer);
    stepTimer = null;
  }
}

const MAX_POLL_ROUNDS = 40; // 40 x 30 iterations bounds traffic when jitter persists

function pollSteps(): void {
  stopStepPolling();
  const token = vm.nextToken();
  let rounds = 0;
  const tick = async () => {
    if (!vm.sessionId) return;
    try {
      const payload = await api.step(vm.sessionId, 30);
      if (!vm.applyStep(payload, token)) return; // superseded
      redraw();
      rounds += 1;
      if (payload.converged) {
        setStatus(`FY ${vm.year} settled`);
      } else if (rounds < MAX_POLL_ROUNDS) {
        stepTimer = window.setTimeout(tick, 250);
      } else {
        setStatus(`FY ${vm.year} (simulation paused)`);
      }
    } catch (err) {
      handleApiError(err);
    }
  };
  stepTimer = window.setTimeout(tick, 120);
}

function handleApiError(err: unknown): void {
  if (err instanceof ApiError && err.status === 410) {
    setStatus("session expired; press Apply to recreate it");
    return;
  }
  setStatus(err instanceof Error ? err.message : String(err));
}

async function createSession(): Promise<void> {
  const state = configState();
  if (validateConfig(state).length) return;
  stopStepPolling();
  try {
    const payload = await api.createSession(el<HTMLSelectElement>("dataset-select").value, {
      year: state.year,
      x: state.x,
      y: state.y,
      limit: state.limit,
      offset: state.offset,
      layout: state.layout,
      seed: state.seed,
    });
    vm.applyCreate(payload);
    hidePopup(popup);
    viewport = defaultViewport(canvas.width, canvas.height);
    setStatus(`FY ${vm.year}: ${payload.nodes.length} nodes, ${payload.edges.length} edges`);
    redraw();
    pollSteps();
    await refreshChart();
  } catch (err) {
    handleApiError(err);
  }
}

async function transitionTo(year: number): Promise<void> {
  if (!vm.sessionId || year === vm.year) return;
  stopStepPolling();
  const token = vm.nextToken();
  try {
    const payload = await api.transition(vm.sessionId, year);
    if (!vm.beginTransition(payload, token)) return;
    el<HTMLInputElement>("year-input").value = String(year);
    el<HTMLInputElement>("year-slider").value = String(year);
    redraw();
    const advance = () => {
      const phase = vm.advancePhase();
      redraw();
      if (phase !== "idle" && phase !== "add") {
        window.setTimeout(advance, PHASE_MS);
      } else {
        window.setTimeout(() => {
          vm.advancePhase();
          redraw();
          pollSteps();
        }, PHASE_MS);
      }
    };
    window.setTimeout(advance, PHASE_MS);
  } catch (err) {
    handleApiError(err);
  }
}

async function refreshChart(): Promise<void> {
  const state = configState();
  if (!state.x) return;
  try {
    const series = await api.chart(
      vm.dataset,
      state.x,
      state.limit ?? undefined,
      state.offset ?? undefined,
    );
    chartGeometry = computeChartGeometry(series, chartCanvas.width, chartCanvas.height);
    paintChart(chartCtx, chartGeometry, chartCanvas.width, chartCanvas.height, hoveredSeries);
  } catch (err) {
    handleApiError(err);
  }
}

function setAutoplay(on: boolean): void {
  vm.autoplay = on;
  if (autoplayTimer !== null) {
    window.clearInterval(autoplayTimer);
    autoplayTimer = null;
  }
  if (on) {
    autoplayTimer = window.setInterval(() => {
      if (vm.phase === "idle") void transitionTo(vm.nextYear());
    }, AUTOPLAY_DWELL_MS);
  }
}

// -- canvas events ------------------------------------------------------------

let panning = false;
let lastPointer: [number, number] = [0, 0];

canvas.addEventListener("pointerdown", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const sx = ev.clientX - rect.left;
  const sy = ev.clientY - rect.top;
  lastPointer = [sx, sy];
  const hit = hitTest(scene, sx, sy);
  const mode = drag.pointerDown(hit);
  if (mode === "pan") {
    panning = true;
  } else if (mode === "shake") {
    canvas.classList.add("shake");
    window.setTimeout(() => canvas.classList.remove("shake"), 300);
  }
  canvas.setPointerCapture(ev.pointerId);
});

canvas.addEventListener("pointermove", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const sx = ev.clientX - rect.left;
  const sy = ev.clientY - rect.top;
  if (drag.active) {
    drag.pointerMove(viewport, sx, sy);
    redraw();
  } else if (panning) {
    viewport = panBy(viewport, sx - lastPointer[0], sy - lastPointer[1]);
    redraw();
  }
  lastPointer = [sx, sy];
});

canvas.addEventListener("pointerup", async (ev) => {
  const rect = canvas.getBoundingClientRect();
  const sx = ev.clientX - rect.left;
  const sy = ev.clientY - rect.top;
  if (drag.active) {
    try {
      await drag.pointerUp(viewport, sx, sy);
      pollSteps();
    } catch (err) {
      handleApiError(err);
    }
  } else if (panning) {
    panning = false;
  }
});

canvas.addEventListener("click", async (ev) => {
  if (drag.active) return;
  const rect = canvas.getBoundingClientRect();
  const hit = hitTest(scene, ev.clientX - rect.left, ev.clientY - rect.top);
  if (hit === null) {
    hidePopup(popup);
    vm.selectedApplicant = null;
    return;
  }
  const node = vm.nodes.get(hit);
  if (node?.kind !== "applicant") {
    // attribute click: toggle a selection ring, never a popup
    if (node && vm.highlighted.has(hit)) vm.highlighted.delete(hit);
    else if (node) vm.highlighted.add(hit);
    redraw();
    return;
  }
  try {
    const detail = await api.applicantDetail(vm.dataset, hit);
    vm.selectedApplicant = hit;
    renderPopup(popup, detail);
  } catch (err) {
    handleApiError(err);
  }
});

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  const rect = canvas.getBoundingClientRect();
  const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
  viewport = zoomAt(viewport, ev.clientX - rect.left, ev.clientY - rect.top, factor);
  redraw();
});

chartCanvas.addEventListener("pointermove", (ev) => {
  if (!chartGeometry) return;
  const rect = chartCanvas.getBoundingClientRect();
  const next = nearestLine(chartGeometry, ev.clientX - rect.left, ev.clientY - rect.top);
  if (next !== hoveredSeries) {
    hoveredSeries = next;
    paintChart(chartCtx, chartGeometry, chartCanvas.width, chartCanvas.height, hoveredSeries);
    redraw();
  }
});

// -- config panel wiring --------------------------------------------------------

async function loadDataset(datasetId: string): Promise<void> {
  const [attributes, years] = await Promise.all([
    api.attributes(datasetId),
    api.years(datasetId),
  ]);
  vm.dataset = datasetId;
  vm.years = years;
  const fill = (select: HTMLSelectElement) => {
    select.innerHTML = "";
    for (const a of attributes) {
      const opt = document.createElement("option");
      opt.value = a.type;
      opt.textContent = `${a.type} (${a.value_count})`;
      select.appendChild(opt);
    }
  };
  fill(el<HTMLSelectElement>("x-select"));
  const ySelect = el<HTMLSelectElement>("y-select");
  fill(ySelect);
  if (attributes.length > 1) ySelect.selectedIndex = 1;
  const slider = el<HTMLInputElement>("year-slider");
  slider.min = String(Math.min(...years));
  slider.max = String(Math.max(...years));
  slider.value = String(Math.min(...years));
  el<HTMLInputElement>("year-input").value = slider.value;
  refreshValidation();
}

async function boot(): Promise<void> {
  const datasets = await api.datasets();
  const select = el<HTMLSelectElement>("dataset-select");
  select.innerHTML = "";
  for (const d of datasets) {
    const opt = document.createElement("option");
    opt.value = d.id;
    opt.textContent = `${d.id} (${d.nodes} nodes)`;
    select.appendChild(opt);
  }
  if (!datasets.length) {
    setStatus("no datasets on the server");
    return;
  }
  await loadDataset(datasets[0].id);
  select.addEventListener("change", () => void loadDataset(select.value));
  el<HTMLButtonElement>("apply").addEventListener("click", () => void createSession());
  for (const id of ["x-select", "y-select", "limit", "offset", "seed"]) {
    el(id).addEventListener("input", refreshValidation);
  }
  const slider = el<HTMLInputElement>("year-slider");
  slider.addEventListener("change", () => void transitionTo(Number(slider.value)));
  const yearInput = el<HTMLInputElement>("year-input");
  yearInput.addEventListener("change", () => void transitionTo(Number(yearInput.value)));
  el<HTMLInputElement>("autoplay").addEventListener("change", (ev) =>
    setAutoplay((ev.target as HTMLInputElement).checked),
  );
  setStatus("pick attributes and press Apply");
}

void boot();
