/**
 * Minimal slippy-map pane: aerial tiles as absolutely positioned images
 * (the same z/x/y template the detector saw) with an SVG polygon overlay
 * color-coded by curation status.
 */

import { fitBounds, TILE_SIZE, tileRange, toScreen, Viewport } from './mercator';
import type { Panel, PanelStatus } from './types';

const SVG_NS = 'http://www.w3.org/2000/svg';

export interface MapOptions {
  tileUrlTemplate?: string;
  width?: number;
  height?: number;
  maxZoom?: number;
  onSelect?: (panelId: string) => void;
}

export class MapPane {
  private view: Viewport | null = null;
  private readonly polygons = new Map<string, SVGPathElement>();
  private readonly root: HTMLElement;
  private svg: SVGSVGElement | null = null;

  constructor(container: HTMLElement, private readonly options: MapOptions = {}) {
    this.root = container;
    this.root.classList.add('map-pane');
  }

  render(panels: Panel[]): void {
    this.root.textContent = '';
    this.polygons.clear();
    this.svg = null;
    if (panels.length === 0) {
      const empty = document.createElement('p');
      empty.className = 'map-empty';
      empty.textContent = 'No panels in this scan.';
      this.root.appendChild(empty);
      return;
    }

    const lats = panels.flatMap((p) => p.ring.map((v) => v[1]));
    const lons = panels.flatMap((p) => p.ring.map((v) => v[0]));
    const width = this.options.width ?? this.root.clientWidth ?? 800;
    const height = this.options.height ?? this.root.clientHeight ?? 600;
    this.view = fitBounds(
      Math.min(...lats), Math.min(...lons), Math.max(...lats), Math.max(...lons),
      Math.max(width, 64), Math.max(height, 64),
      this.options.maxZoom ?? 21,
    );

    if (this.options.tileUrlTemplate) this.renderTiles();
    this.renderOverlay(panels);
  }

  private renderTiles(): void {
    if (!this.view || !this.options.tileUrlTemplate) return;
    const layer = document.createElement('div');
    layer.className = 'tile-layer';
    const range = tileRange(this.view);
    const n = 2 ** this.view.zoom;
    for (let ty = range.y0; ty <= range.y1; ty++) {
      for (let tx = range.x0; tx <= range.x1; tx++) {
        if (tx < 0 || ty < 0 || tx >= n || ty >= n) continue;
        const img = document.createElement('img');
        img.src = this.options.tileUrlTemplate
          .replace('{z}', String(this.view.zoom))
          .replace('{x}', String(tx))
          .replace('{y}', String(ty));
        img.width = TILE_SIZE;
        img.height = TILE_SIZE;
        img.style.position = 'absolute';
        img.style.left = `${tx * TILE_SIZE - this.view.originX}px`;
        img.style.top = `${ty * TILE_SIZE - this.view.originY}px`;
        img.draggable = false;
        layer.appendChild(img);
      }
    }
    this.root.appendChild(layer);
  }

  private renderOverlay(panels: Panel[]): void {
    if (!this.view) return;
    const svg = document.createElementNS(SVG_NS, 'svg');
    svg.setAttribute('class', 'panel-overlay');
    svg.setAttribute('width', String(this.view.width));
    svg.setAttribute('height', String(this.view.height));
    for (const panel of panels) {
      const path = document.createElementNS(SVG_NS, 'path');
      path.setAttribute('d', this.pathFor(panel));
      path.setAttribute('class', `panel status-${panel.status}`);
      path.setAttribute('data-panel-id', panel.panelId);
      path.addEventListener('click', () => this.options.onSelect?.(panel.panelId));
      svg.appendChild(path);
      this.polygons.set(panel.panelId, path);
    }
    this.svg = svg;
    this.root.appendChild(svg);
  }

  private pathFor(panel: Panel): string {
    if (!this.view) return '';
    const pts = panel.ring.map(([lon, lat]) => toScreen(this.view!, lat, lon));
    const [head, ...rest] = pts;
    return (
      `M ${head.x.toFixed(1)} ${head.y.toFixed(1)} ` +
      rest.map((p) => `L ${p.x.toFixed(1)} ${p.y.toFixed(1)}`).join(' ') +
      ' Z'
    );
  }

  setStatus(panelId: string, status: PanelStatus): void {
    const path = this.polygons.get(panelId);
    if (!path) return;
    const focused = path.classList.contains('focused');
    path.setAttribute('class', `panel status-${status}${focused ? ' focused' : ''}`);
  }

  focus(panelId: string | null): void {
    for (const [id, path] of this.polygons) {
      path.classList.toggle('focused', id === panelId);
    }
  }

  get element(): SVGSVGElement | null {
    return this.svg;
  }
}
