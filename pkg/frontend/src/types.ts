/** Wire types for the review UI (mirrors the service's GeoJSON contract). */

export type PanelStatus = 'detected' | 'accepted' | 'rejected';
export type Verdict = 'accepted' | 'rejected';

/** One panel from GET /v1/scans/{scan}/panels.geojson. */
export interface Panel {
  panelId: string;
  buildingId: string;
  detector: string;
  confidence: number;
  status: PanelStatus;
  areaM2: number;
  /** Closed [lon, lat] ring. */
  ring: Array<[number, number]>;
}

export interface Decision {
  panelId: string;
  status: Verdict;
}

/** One line of the server decision log. */
export interface LogEntry {
  timestamp: string;
  panelId: string;
  status: Verdict;
  operator: string;
}

export interface CurationResponse {
  applied: number;
  unknown: string[];
}

export interface GeoJsonFeature {
  type: 'Feature';
  properties: {
    panel_id: string;
    building_id: string;
    detector: string;
    confidence: number;
    status: PanelStatus;
    area_m2: number;
    detected_at: string;
  };
  geometry: { type: 'Polygon'; coordinates: Array<Array<[number, number]>> };
}

export interface GeoJsonFeatureCollection {
  type: 'FeatureCollection';
  features: GeoJsonFeature[];
}
