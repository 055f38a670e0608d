/**
 * Single-flight debounced submitter: a burst of triggers collapses into
 * one run after the quiet period, and starting a new run aborts the one
 * still in flight (the newest submission always wins).
 */

export type Runner = (signal: AbortSignal) => Promise<void>;

export class DebouncedSubmitter {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight: AbortController | null = null;

  constructor(
    private readonly delayMs: number,
    private readonly run: Runner,
  ) {}

  /** Schedule a run after the quiet period, restarting the clock. */
  trigger(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.start();
    }, this.delayMs);
  }

  /** Run immediately (the explicit Results button path). */
  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    void this.start();
  }

  private async start(): Promise<void> {
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    try {
      await this.run(controller.signal);
    } finally {
      if (this.inFlight === controller) this.inFlight = null;
    }
  }
}
