/**
 * Review-UI bootstrap: load a scan, draw the map and the review list,
 * and wire curation decisions with offline-tolerant syncing.
 *
 * URL parameters: ?scan=<name> (required), &base=<service url>,
 * &tiles=<z/x/y template>, &operator=<name>.
 */

import { ApiClient } from './api';
import { bindKeys } from './keyboard';
import { MapPane } from './map';
import { CurationSession } from './session';
import type { Panel, Verdict } from './types';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const scan = params.get('scan');
  const app = document.getElementById('app')!;
  if (!scan) {
    app.appendChild(el('p', 'error', 'Pass ?scan=<name> in the URL.'));
    return;
  }
  const api = new ApiClient(params.get('base') ?? '');
  const operator = params.get('operator') ?? 'reviewer';

  let panels: Panel[];
  try {
    panels = await api.getPanels(scan);
  } catch (err) {
    const box = el('div', 'error');
    box.appendChild(el('p', '', `Cannot load scan "${scan}": ${String(err)}`));
    const retry = el('button', '', 'Retry');
    retry.addEventListener('click', () => window.location.reload());
    box.appendChild(retry);
    app.appendChild(box);
    return;
  }

  const session = new CurationSession(api, scan, panels, operator);

  const header = el('header');
  header.appendChild(el('h1', '', `Review: ${scan}`));
  const badge = el('span', 'badge', '');
  header.appendChild(badge);
  app.appendChild(header);

  const layout = el('div', 'layout');
  const mapBox = el('div', 'map-box');
  const listBox = el('aside', 'list-box');
  layout.appendChild(mapBox);
  layout.appendChild(listBox);
  app.appendChild(layout);

  const map = new MapPane(mapBox, {
    tileUrlTemplate: params.get('tiles') ?? undefined,
    width: 800,
    height: 640,
    onSelect: (id) => focusRow(id),
  });
  map.render(panels);

  const rows = new Map<string, HTMLElement>();
  const list = el('ul', 'panel-list');
  for (const panel of session.listOrder()) {
    const row = el('li', `row status-${panel.status}`);
    row.dataset.panelId = panel.panelId;
    row.tabIndex = -1;
    row.appendChild(
      el('span', 'conf', `${(panel.confidence * 100).toFixed(0)}%`),
    );
    row.appendChild(el('span', 'meta', `${panel.areaM2.toFixed(1)} m² · ${panel.buildingId}`));
    const acceptBtn = el('button', 'accept', 'accept');
    const rejectBtn = el('button', 'reject', 'reject');
    acceptBtn.addEventListener('click', () => decide(panel.panelId, 'accepted'));
    rejectBtn.addEventListener('click', () => decide(panel.panelId, 'rejected'));
    row.appendChild(acceptBtn);
    row.appendChild(rejectBtn);
    row.addEventListener('click', () => focusRow(panel.panelId));
    list.appendChild(row);
    rows.set(panel.panelId, row);
  }
  if (panels.length === 0) {
    listBox.appendChild(el('p', 'empty', 'This scan has no panels.'));
  }
  listBox.appendChild(list);

  function refreshBadge(): void {
    const n = session.unsyncedCount;
    badge.textContent = n === 0 ? 'synced' : `${n} unsynced`;
    badge.classList.toggle('dirty', n > 0);
  }

  function focusRow(id: string | null): void {
    map.focus(id);
    for (const [panelId, row] of rows) {
      row.classList.toggle('focused', panelId === id);
    }
    if (id) rows.get(id)?.scrollIntoView({ block: 'nearest' });
  }

  async function decide(id: string, verdict: Verdict): Promise<void> {
    const outcome = await session.decide(id, verdict);
    if (outcome.changed) {
      map.setStatus(id, verdict);
      const row = rows.get(id);
      if (row) row.className = `row status-${verdict}`;
      focusRow(session.focusedId);
    }
    refreshBadge();
  }

  bindKeys(window, {
    accept: () => session.focusedId && decide(session.focusedId, 'accepted'),
    reject: () => session.focusedId && decide(session.focusedId, 'rejected'),
    next: () => focusRow(session.focusNext()),
    previous: () => focusRow(session.focusPrevious()),
  });

  window.addEventListener('online', async () => {
    await session.setOnline(true);
    refreshBadge();
  });
  window.addEventListener('offline', () => void session.setOnline(false));

  focusRow(session.focusedId);
  refreshBadge();
}

void boot();
