/** Session clock: monotone millisecond timestamps for outgoing frames.
 *
 * Wall/performance clocks can stall or repeat (tab hidden, timer
 * clamping); the gateway requires strictly increasing integers.
 */

export class SessionClock {
  private readonly start: number;
  private last = -1;

  constructor(startNow: number) {
    this.start = startNow;
  }

  next(now: number): number {
    let t = Math.max(0, Math.round(now - this.start));
    if (t <= this.last) t = this.last + 1;
    this.last = t;
    return t;
  }

  current(now: number): number {
    return Math.max(0, Math.round(now - this.start));
  }
}
