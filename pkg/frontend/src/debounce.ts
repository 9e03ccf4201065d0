/** Latest-wins request scheduling for slider-driven sweeps.
 *
 * Rapid calls within the debounce window collapse into one; while a request
 * is in flight the newest call waits as the single pending slot, so at most
 * one request is ever outstanding and the last value always wins.
 */

export class LatestWinsScheduler<T> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private pending: T | null = null;

  constructor(
    private readonly run: (request: T) => Promise<void>,
    private readonly delayMs = 250,
  ) {}

  request(value: T): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(value);
    }, this.delayMs);
  }

  /** Bypass the debounce window (initial load, explicit submit). */
  fireNow(value: T): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    void this.fire(value);
  }

  private async fire(value: T): Promise<void> {
    if (this.inFlight) {
      this.pending = value;
      return;
    }
    this.inFlight = true;
    try {
      await this.run(value);
    } finally {
      this.inFlight = false;
      if (this.pending !== null) {
        const next = this.pending;
        this.pending = null;
        void this.fire(next);
      }
    }
  }
}
