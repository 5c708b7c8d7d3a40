/**
 * Client-side curation state for one scan.
 *
 * The review queue holds undecided panels sorted by ascending confidence
 * (most likely mistakes first). A decision is retained in a local outbox
 * before the queue advances and is pushed to the server immediately when
 * online; while offline it stays queued and syncs on reconnect. Applying
 * the server's decision log over the initially loaded panels must
 * reproduce exactly the client's state (replay equivalence).
 */

import type { ApiClient } from './api';
import type { Decision, LogEntry, Panel, PanelStatus, Verdict } from './types';

export interface DecideOutcome {
  /** false when the decision was a duplicate and nothing changed */
  changed: boolean;
  synced: boolean;
}

export class CurationSession {
  readonly scan: string;
  readonly panels: Map<string, Panel>;
  /** Current status per panel id (local view; server catches up via outbox). */
  private readonly statuses = new Map<string, PanelStatus>();
  /** Decisions not yet acknowledged by the server, in decision order. */
  private outbox: Decision[] = [];
  private pendingIds: string[];
  private focused: string | null;
  private online = true;
  private warnings: string[] = [];

  constructor(
    private readonly api: ApiClient,
    scan: string,
    panels: Panel[],
    private readonly operator: string = 'reviewer',
  ) {
    this.scan = scan;
    this.panels = new Map(panels.map((p) => [p.panelId, p]));
    for (const p of panels) this.statuses.set(p.panelId, p.status);
    this.pendingIds = panels
      .filter((p) => p.status === 'detected')
      .sort((a, b) => a.confidence - b.confidence || a.panelId.localeCompare(b.panelId))
      .map((p) => p.panelId);
    this.focused = this.pendingIds[0] ?? null;
  }

  get focusedId(): string | null {
    return this.focused;
  }

  get pending(): string[] {
    return [...this.pendingIds];
  }

  get unsyncedCount(): number {
    return this.outbox.length;
  }

  get lastWarnings(): string[] {
    return [...this.warnings];
  }

  statusOf(panelId: string): PanelStatus | undefined {
    return this.statuses.get(panelId);
  }

  /** Review-order listing: pending first (ascending confidence), then decided. */
  listOrder(): Panel[] {
    const all = [...this.panels.values()].sort(
      (a, b) => a.confidence - b.confidence || a.panelId.localeCompare(b.panelId),
    );
    const pending = all.filter((p) => this.statuses.get(p.panelId) === 'detected');
    const decided = all.filter((p) => this.statuses.get(p.panelId) !== 'detected');
    return [...pending, ...decided];
  }

  /**
   * Record a verdict. A repeat of the panel's current verdict is a
   * no-op (rapid double-clicks produce exactly one log entry); choosing
   * the other verdict re-decides it, last write winning on the server.
   */
  async decide(panelId: string, verdict: Verdict): Promise<DecideOutcome> {
    if (!this.panels.has(panelId)) {
      this.warnings = [`unknown panel ${panelId}`];
      return { changed: false, synced: false };
    }
    if (this.statuses.get(panelId) === verdict) {
      return { changed: false, synced: this.outbox.length === 0 };
    }
    this.statuses.set(panelId, verdict);
    this.outbox.push({ panelId, status: verdict });
    this.pendingIds = this.pendingIds.filter((id) => id !== panelId);
    if (this.focused === panelId) this.focused = this.pendingIds[0] ?? null;
    const synced = await this.flush();
    return { changed: true, synced };
  }

  /** Push queued decisions; returns true when the outbox drained. */
  async flush(): Promise<boolean> {
    if (this.outbox.length === 0) return true;
    if (!this.online) return false;
    const batch = [...this.outbox];
    try {
      const result = await this.api.postCuration(this.scan, batch, this.operator);
      this.warnings = result.unknown.map((id) => `server skipped unknown panel ${id}`);
      this.outbox = this.outbox.slice(batch.length);
      return this.outbox.length === 0;
    } catch {
      // network trouble: keep everything queued for the next attempt
      return false;
    }
  }

  /** Connectivity change; reconnecting triggers a sync of queued decisions. */
  async setOnline(online: boolean): Promise<void> {
    this.online = online;
    if (online) await this.flush();
  }

  focusNext(): string | null {
    if (this.pendingIds.length === 0) return (this.focused = null);
    const i = this.focused ? this.pendingIds.indexOf(this.focused) : -1;
    this.focused = this.pendingIds[(i + 1) % this.pendingIds.length];
    return this.focused;
  }

  focusPrevious(): string | null {
    if (this.pendingIds.length === 0) return (this.focused = null);
    const i = this.focused ? this.pendingIds.indexOf(this.focused) : 0;
    this.focused = this.pendingIds[(i - 1 + this.pendingIds.length) % this.pendingIds.length];
    return this.focused;
  }

  /** Statuses keyed by panel id (for asserting replay equivalence). */
  snapshot(): Record<string, PanelStatus> {
    return Object.fromEntries(this.statuses);
  }

  /** Rebuild the end state by replaying a server decision log. */
  static replayLog(panels: Panel[], log: LogEntry[]): Record<string, PanelStatus> {
    const statuses: Record<string, PanelStatus> = {};
    for (const p of panels) statuses[p.panelId] = p.status;
    for (const entry of log) {
      if (entry.panelId in statuses) statuses[entry.panelId] = entry.status;
    }
    return statuses;
  }
}
