import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { CurationSession } from '../src/session';
import { FakeService, makePanels } from './fake_service';

async function setup(count = 12) {
  const panels = makePanels(count);
  const service = new FakeService('toy', panels);
  const api = new ApiClient('', service.fetch);
  const loaded = await api.getPanels('toy');
  const session = new CurationSession(api, 'toy', loaded, 'tester');
  return { panels: loaded, service, api, session };
}

describe('review queue', () => {
  it('orders pending panels by ascending confidence', async () => {
    const { session, panels } = await setup();
    const confidences = session.pending.map(
      (id) => panels.find((p) => p.panelId === id)!.confidence,
    );
    expect(confidences).toEqual([...confidences].sort((a, b) => a - b));
  });

  it('focuses the lowest-confidence panel first and advances on decision', async () => {
    const { session } = await setup();
    const [first, second] = session.pending;
    expect(session.focusedId).toBe(first);
    await session.decide(first, 'accepted');
    expect(session.focusedId).toBe(second);
    expect(session.pending).not.toContain(first);
  });

  it('excludes already-curated panels from the pending queue', async () => {
    const panels = makePanels(3);
    panels[1].status = 'rejected';
    const service = new FakeService('toy', panels);
    const api = new ApiClient('', service.fetch);
    const session = new CurationSession(api, 'toy', await api.getPanels('toy'));
    expect(session.pending).toHaveLength(2);
    expect(session.statusOf(panels[1].panelId)).toBe('rejected');
  });
});

describe('decisions', () => {
  it('persists through the API and updates server state', async () => {
    const { session, service } = await setup();
    const id = session.pending[0];
    const outcome = await session.decide(id, 'rejected');
    expect(outcome).toEqual({ changed: true, synced: true });
    expect(service.statuses.get(id)).toBe('rejected');
    expect(service.log).toHaveLength(1);
    expect(service.log[0]).toContain(`${id} rejected tester`);
  });

  it('dedups rapid double-clicks into exactly one log entry', async () => {
    const { session, service } = await setup();
    const id = session.pending[0];
    await Promise.all([session.decide(id, 'rejected'), session.decide(id, 'rejected')]);
    await session.decide(id, 'rejected');
    expect(service.log.filter((l) => l.includes(id))).toHaveLength(1);
  });

  it('re-deciding with the other verdict wins last', async () => {
    const { session, service } = await setup();
    const id = session.pending[0];
    await session.decide(id, 'rejected');
    await session.decide(id, 'accepted');
    expect(service.statuses.get(id)).toBe('accepted');
    expect(service.log.filter((l) => l.includes(id))).toHaveLength(2);
  });

  it('surfaces unknown panels without crashing', async () => {
    const { session } = await setup();
    const outcome = await session.decide('panel-nope', 'accepted');
    expect(outcome.changed).toBe(false);
    expect(session.lastWarnings[0]).toContain('panel-nope');
  });
});

describe('offline behavior', () => {
  it('queues decisions offline and syncs on reconnect', async () => {
    const { session, service } = await setup();
    const [a, b] = session.pending;

    service.offline = true;
    await session.setOnline(false);
    await session.decide(a, 'rejected');
    await session.decide(b, 'accepted');
    expect(session.unsyncedCount).toBe(2);
    expect(service.log).toHaveLength(0);
    // local view already reflects the decisions
    expect(session.statusOf(a)).toBe('rejected');

    service.offline = false;
    await session.setOnline(true);
    expect(session.unsyncedCount).toBe(0);
    expect(service.log).toHaveLength(2);
    expect(service.statuses.get(a)).toBe('rejected');
    expect(service.statuses.get(b)).toBe('accepted');
  });

  it('keeps the queue when the network drops mid-session', async () => {
    const { session, service } = await setup();
    const [a, b] = session.pending;
    await session.decide(a, 'accepted');
    service.offline = true; // connection lost, UI not yet notified
    const outcome = await session.decide(b, 'rejected');
    expect(outcome).toEqual({ changed: true, synced: false });
    expect(session.unsyncedCount).toBe(1);
    service.offline = false;
    await session.flush();
    expect(session.unsyncedCount).toBe(0);
    expect(service.log).toHaveLength(2);
  });
});

describe('replay equivalence', () => {
  it('client state equals the state rebuilt from the server decision log', async () => {
    const { session, service, api, panels } = await setup(12);
    // scripted 10-decision session, with an offline stretch in the middle
    const script: Array<['accepted' | 'rejected', number]> = [
      ['accepted', 0], ['rejected', 1], ['accepted', 2], ['rejected', 3],
      ['accepted', 4], ['rejected', 5], ['accepted', 6], ['rejected', 7],
      ['accepted', 8], ['rejected', 9],
    ];
    const ids = session.pending;
    for (const [i, [verdict, idx]] of script.entries()) {
      if (i === 3) {
        service.offline = true;
        await session.setOnline(false);
      }
      if (i === 7) {
        service.offline = false;
        await session.setOnline(true);
      }
      await session.decide(ids[idx], verdict);
    }
    await session.setOnline(true);
    expect(session.unsyncedCount).toBe(0);

    const log = await api.getDecisionLog('toy');
    expect(log).toHaveLength(10);
    const rebuilt = CurationSession.replayLog(panels, log);
    expect(session.snapshot()).toEqual(rebuilt);
  });

  it('replay applies entries in order (last write wins)', async () => {
    const { session, service, api, panels } = await setup(3);
    const id = session.pending[0];
    await session.decide(id, 'rejected');
    await session.decide(id, 'accepted');
    const rebuilt = CurationSession.replayLog(panels, await api.getDecisionLog('toy'));
    expect(rebuilt[id]).toBe('accepted');
    expect(session.snapshot()).toEqual(rebuilt);
    expect(service.statuses.get(id)).toBe('accepted');
  });
});

describe('keyboard navigation model', () => {
  it('cycles focus through pending panels only', async () => {
    const { session } = await setup(3);
    const [a, b, c] = session.pending;
    expect(session.focusedId).toBe(a);
    expect(session.focusNext()).toBe(b);
    expect(session.focusNext()).toBe(c);
    expect(session.focusNext()).toBe(a);
    expect(session.focusPrevious()).toBe(c);
    await session.decide(b, 'accepted');
    expect(session.pending).toEqual([a, c]);
  });
});
