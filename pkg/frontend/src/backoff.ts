/** Reconnect backoff: 0.5 s doubling to an 8 s cap. */

export const INITIAL_DELAY_MS = 500;
export const MAX_DELAY_MS = 8000;

export function backoffDelay(attempt: number): number {
  if (attempt < 0) return INITIAL_DELAY_MS;
  return Math.min(INITIAL_DELAY_MS * 2 ** attempt, MAX_DELAY_MS);
}
