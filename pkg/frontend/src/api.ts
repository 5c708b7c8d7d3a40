/** Thin typed client over the documented service endpoints. */

import type {
  CurationResponse,
  Decision,
  GeoJsonFeatureCollection,
  LogEntry,
  Panel,
  Verdict,
} from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  async getPanels(scan: string): Promise<Panel[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/scans/${encodeURIComponent(scan)}/panels.geojson`);
    if (!resp.ok) throw new ApiError(resp.status, `cannot load scan ${scan}`);
    const doc = (await resp.json()) as GeoJsonFeatureCollection;
    return doc.features.map(featureToPanel);
  }

  async postCuration(scan: string, decisions: Decision[], operator: string): Promise<CurationResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/curation`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({
        scan,
        operator,
        decisions: decisions.map((d) => ({ panel_id: d.panelId, status: d.status })),
      }),
    });
    if (!resp.ok) throw new ApiError(resp.status, `curation rejected for ${scan}`);
    return (await resp.json()) as CurationResponse;
  }

  async getDecisionLog(scan: string): Promise<LogEntry[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/scans/${encodeURIComponent(scan)}/decisions`);
    if (!resp.ok) throw new ApiError(resp.status, `cannot load decision log for ${scan}`);
    return parseDecisionLog(await resp.text());
  }
}

export function featureToPanel(f: { properties: Record<string, unknown>; geometry: { coordinates: Array<Array<[number, number]>> } }): Panel {
  const p = f.properties;
  return {
    panelId: String(p.panel_id),
    buildingId: String(p.building_id ?? ''),
    detector: String(p.detector ?? ''),
    confidence: Number(p.confidence ?? 0),
    status: (p.status as Panel['status']) ?? 'detected',
    areaM2: Number(p.area_m2 ?? 0),
    ring: f.geometry.coordinates[0],
  };
}

/** Lines look like: `2026-05-01T12:00:00Z <panel_id> <accepted|rejected> <operator>`. */
export function parseDecisionLog(text: string): LogEntry[] {
  const entries: LogEntry[] = [];
  for (const raw of text.split('\n')) {
    const line = raw.trim();
    if (!line) continue;
    const parts = line.split(/\s+/);
    if (parts.length < 4) continue;
    const status = parts[2];
    if (status !== 'accepted' && status !== 'rejected') continue;
    entries.push({
      timestamp: parts[0],
      panelId: parts[1],
      status: status as Verdict,
      operator: parts.slice(3).join(' '),
    });
  }
  return entries;
}
