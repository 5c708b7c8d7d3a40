/** Web-Mercator math for the slippy tile pane. */

export const TILE_SIZE = 256;
export const MAX_LAT = 85.05112877980659;

export function lonToWorldX(lon: number, zoom: number): number {
  return ((lon + 180) / 360) * TILE_SIZE * 2 ** zoom;
}

export function latToWorldY(lat: number, zoom: number): number {
  const clamped = Math.max(-MAX_LAT, Math.min(MAX_LAT, lat));
  const rad = (clamped * Math.PI) / 180;
  return ((1 - Math.asinh(Math.tan(rad)) / Math.PI) / 2) * TILE_SIZE * 2 ** zoom;
}

export function worldXToLon(x: number, zoom: number): number {
  return (x / (TILE_SIZE * 2 ** zoom)) * 360 - 180;
}

export function worldYToLat(y: number, zoom: number): number {
  const n = Math.PI * (1 - (2 * y) / (TILE_SIZE * 2 ** zoom));
  return (Math.atan(Math.sinh(n)) * 180) / Math.PI;
}

export function tileAt(lat: number, lon: number, zoom: number): { x: number; y: number } {
  return {
    x: Math.floor(lonToWorldX(lon, zoom) / TILE_SIZE),
    y: Math.floor(latToWorldY(lat, zoom) / TILE_SIZE),
  };
}

export interface Viewport {
  zoom: number;
  /** world-pixel coordinates of the view's top-left corner */
  originX: number;
  originY: number;
  width: number;
  height: number;
}

/**
 * Pick the highest zoom (up to maxZoom) at which the bbox fits the
 * given pane, and center it.
 */
export function fitBounds(
  south: number,
  west: number,
  north: number,
  east: number,
  width: number,
  height: number,
  maxZoom = 21,
  paddingPx = 24,
): Viewport {
  let zoom = maxZoom;
  for (; zoom > 0; zoom--) {
    const spanX = lonToWorldX(east, zoom) - lonToWorldX(west, zoom);
    const spanY = latToWorldY(south, zoom) - latToWorldY(north, zoom);
    if (spanX <= width - 2 * paddingPx && spanY <= height - 2 * paddingPx) break;
  }
  const cx = (lonToWorldX(west, zoom) + lonToWorldX(east, zoom)) / 2;
  const cy = (latToWorldY(north, zoom) + latToWorldY(south, zoom)) / 2;
  return { zoom, originX: cx - width / 2, originY: cy - height / 2, width, height };
}

export function toScreen(view: Viewport, lat: number, lon: number): { x: number; y: number } {
  return {
    x: lonToWorldX(lon, view.zoom) - view.originX,
    y: latToWorldY(lat, view.zoom) - view.originY,
  };
}

export function tileRange(view: Viewport): { x0: number; y0: number; x1: number; y1: number } {
  return {
    x0: Math.floor(view.originX / TILE_SIZE),
    y0: Math.floor(view.originY / TILE_SIZE),
    x1: Math.floor((view.originX + view.width - 1) / TILE_SIZE),
    y1: Math.floor((view.originY + view.height - 1) / TILE_SIZE),
  };
}
