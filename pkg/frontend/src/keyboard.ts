/**
 * Keyboard-only review: at Table-2 scale (a thousand-plus detections)
 * the mouse is the bottleneck, so everything binds to keys.
 */

export interface KeyActions {
  accept: () => void;
  reject: () => void;
  next: () => void;
  previous: () => void;
}

const BINDINGS: Record<string, keyof KeyActions> = {
  a: 'accept',
  r: 'reject',
  x: 'reject',
  n: 'next',
  j: 'next',
  ArrowDown: 'next',
  p: 'previous',
  k: 'previous',
  ArrowUp: 'previous',
};

export function bindKeys(target: EventTarget, actions: KeyActions): () => void {
  const handler = (event: Event) => {
    const key = (event as KeyboardEvent).key;
    const action = BINDINGS[key];
    if (!action) return;
    event.preventDefault();
    actions[action]();
  };
  target.addEventListener('keydown', handler);
  return () => target.removeEventListener('keydown', handler);
}
