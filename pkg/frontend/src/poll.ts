type IntervalHandle = unknown;
type SetIntervalFn = (fn: () => void, ms: number) => IntervalHandle;
type ClearIntervalFn = (handle: IntervalHandle) => void;

/**
 * Fixed-period refresh driver. The period always equals the configured
 * value; changing it tears the old timer down and starts a fresh one.
 * Overlapping ticks are skipped rather than queued.
 */
export class Poller {
  private handle: IntervalHandle | null = null;
  private currentPeriodS = 0;
  private running = false;

  constructor(
    private tick: () => Promise<void> | void,
    private timers: { set: SetIntervalFn; clear: ClearIntervalFn } = {
      set: (fn, ms) => setInterval(fn, ms),
      clear: (h) => clearInterval(h as ReturnType<typeof setInterval>),
    },
  ) {}

  get periodS(): number {
    return this.currentPeriodS;
  }

  get active(): boolean {
    return this.handle !== null;
  }

  start(periodS: number): void {
    if (!(periodS > 0)) throw new Error(`refresh period must be positive, got ${periodS}`);
    this.stop();
    this.currentPeriodS = periodS;
    this.handle = this.timers.set(() => void this.runOnce(), periodS * 1000);
  }

  setPeriod(periodS: number): void {
    if (periodS === this.currentPeriodS && this.handle !== null) return;
    this.start(periodS);
  }

  stop(): void {
    if (this.handle !== null) {
      this.timers.clear(this.handle);
      this.handle = null;
    }
  }

  /** One immediate refresh, shared with the interval path. */
  async runOnce(): Promise<void> {
    if (this.running) return;
    this.running = true;
    try {
      await this.tick();
    } finally {
      this.running = false;
    }
  }
}
