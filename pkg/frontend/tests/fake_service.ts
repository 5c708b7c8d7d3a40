/**
 * In-memory stand-in for the solarscan HTTP service, implementing the
 * three endpoints the review UI consumes with the same wire formats.
 * `offline = true` makes every call fail like a dropped connection.
 */

import type { FetchLike } from '../src/api';
import type { Panel, PanelStatus } from '../src/types';

export class FakeService {
  offline = false;
  readonly statuses = new Map<string, PanelStatus>();
  readonly log: string[] = [];
  private clock = 0;

  constructor(private readonly scan: string, private readonly panels: Panel[]) {
    for (const p of panels) this.statuses.set(p.panelId, p.status);
  }

  get fetch(): FetchLike {
    return async (url: string, init?: RequestInit) => {
      if (this.offline) throw new TypeError('fetch failed (offline)');
      const { pathname } = new URL(url, 'http://service.test');
      if (pathname === `/v1/scans/${this.scan}/panels.geojson`) {
        return json(this.featureCollection());
      }
      if (pathname === `/v1/scans/${this.scan}/decisions`) {
        return new Response(this.log.join('\n') + (this.log.length ? '\n' : ''), {
          status: 200,
          headers: { 'content-type': 'text/plain' },
        });
      }
      if (pathname === '/v1/curation' && init?.method === 'POST') {
        const body = JSON.parse(String(init.body)) as {
          scan: string;
          operator: string;
          decisions: Array<{ panel_id: string; status: 'accepted' | 'rejected' }>;
        };
        if (body.scan !== this.scan) return json({ error: 'unknown scan' }, 404);
        let applied = 0;
        const unknown: string[] = [];
        for (const d of body.decisions) {
          if (!this.statuses.has(d.panel_id)) {
            unknown.push(d.panel_id);
            continue;
          }
          this.statuses.set(d.panel_id, d.status);
          this.clock += 1;
          const stamp = `2026-05-01T12:${String(this.clock).padStart(2, '0')}:00Z`;
          this.log.push(`${stamp} ${d.panel_id} ${d.status} ${body.operator}`);
          applied += 1;
        }
        return json({ applied, unknown });
      }
      return json({ error: `no route for ${pathname}` }, 404);
    };
  }

  /** Panels as initially loaded (statuses frozen at construction). */
  featureCollection() {
    return {
      type: 'FeatureCollection',
      features: this.panels.map((p) => ({
        type: 'Feature',
        properties: {
          panel_id: p.panelId,
          building_id: p.buildingId,
          detector: p.detector,
          confidence: p.confidence,
          status: p.status,
          area_m2: p.areaM2,
          detected_at: '2026-05-01T10:00:00Z',
        },
        geometry: { type: 'Polygon', coordinates: [p.ring] },
      })),
    };
  }
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

export function makePanels(count: number): Panel[] {
  const out: Panel[] = [];
  for (let i = 0; i < count; i++) {
    const lat = 47.519 + i * 0.0004;
    const lon = 8.54 + (i % 3) * 0.0005;
    out.push({
      panelId: `panel-${String(i).padStart(2, '0')}`,
      buildingId: `way/${100 + i}`,
      detector: 'mock-fixture',
      confidence: Number((0.5 + 0.04 * ((i * 7) % 13)).toFixed(3)),
      status: 'detected',
      areaM2: 20 + i,
      ring: [
        [lon, lat],
        [lon + 0.0001, lat],
        [lon + 0.0001, lat + 0.00008],
        [lon, lat + 0.00008],
        [lon, lat],
      ],
    });
  }
  return out;
}
