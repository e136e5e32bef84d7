/** Job progress tracking by polling.
 *
 * Polls GET /jobs/{id} at a fixed interval until the job reaches a
 * terminal state. Copy shown to the child never uses technical stage
 * names; the raw stage and error detail go to a collapsible
 * "grown-ups" panel. A network blip retries without losing state; a
 * failed job shows no partial media.
 */

import { NetworkError, StoryServiceClient } from "./client.js";
import type { JobJson, JobState } from "./types.js";

export const DEFAULT_POLL_INTERVAL_MS = 2000;

const CHILD_MESSAGES: Record<JobState, string> = {
  queued: "Getting everything ready…",
  writing: "Writing your story…",
  reviewing: "Making sure the story is kind and safe…",
  directing: "Planning the scenes…",
  rendering: "Painting the pictures and playing the music…",
  assembling: "Wrapping it all up…",
  done: "Your story is ready!",
  failed: "We couldn't finish this story. Let's try a different idea together!",
};

export interface TrackerView {
  jobId: string;
  state: JobState;
  childMessage: string;
  grownUpsDetail: string;
  segmentsTotal: number;
  videosDone: number;
  musicDone: number;
  narrationDone: boolean;
  playbackRef: string | null;
  showMedia: boolean;
  terminal: boolean;
}

export interface TrackerOptions {
  intervalMs?: number;
  sleep?: (ms: number) => Promise<void>;
  maxNetworkRetries?: number;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class JobTracker {
  private readonly intervalMs: number;
  private readonly sleep: (ms: number) => Promise<void>;
  private readonly maxNetworkRetries: number;
  private last: JobJson | null = null;
  private networkRetries = 0;
  private cancelled = false;

  constructor(
    private readonly client: StoryServiceClient,
    private readonly jobId: string,
    options: TrackerOptions = {},
  ) {
    this.intervalMs = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
    this.sleep = options.sleep ?? defaultSleep;
    this.maxNetworkRetries = options.maxNetworkRetries ?? 5;
  }

  /** One poll step. Network blips keep the previous snapshot. */
  async poll(): Promise<TrackerView> {
    try {
      this.last = await this.client.getJob(this.jobId);
      this.networkRetries = 0;
    } catch (error) {
      if (error instanceof NetworkError) {
        this.networkRetries += 1;
        if (this.networkRetries > this.maxNetworkRetries) throw error;
      } else {
        throw error;
      }
    }
    return this.view();
  }

  /** Poll until the job is terminal (or the tracker is cancelled). */
  async track(onUpdate?: (view: TrackerView) => void): Promise<TrackerView> {
    let view = await this.poll();
    onUpdate?.(view);
    while (!view.terminal && !this.cancelled) {
      await this.sleep(this.intervalMs);
      if (this.cancelled) break;
      view = await this.poll();
      onUpdate?.(view);
    }
    return view;
  }

  /** Cancel polling (navigation away). */
  cancel(): void {
    this.cancelled = true;
  }

  view(): TrackerView {
    const job = this.last;
    if (job === null) {
      return {
        jobId: this.jobId,
        state: "queued",
        childMessage: CHILD_MESSAGES.queued,
        grownUpsDetail: "waiting for the first status",
        segmentsTotal: 0,
        videosDone: 0,
        musicDone: 0,
        narrationDone: false,
        playbackRef: null,
        showMedia: false,
        terminal: false,
      };
    }
    const failed = job.state === "failed";
    const done = job.state === "done";
    let detail = `stage: ${job.state}`;
    if (job.error !== null) {
      detail = `stage: ${job.error.stage} — ${job.error.message}`;
    }
    return {
      jobId: job.id,
      state: job.state,
      childMessage: CHILD_MESSAGES[job.state],
      grownUpsDetail: detail,
      segmentsTotal: job.progress.segments_total,
      videosDone: job.progress.videos,
      musicDone: job.progress.music,
      narrationDone: job.progress.narration > 0,
      playbackRef: done ? job.package_ref : null,
      showMedia: done && !failed,
      terminal: done || failed,
    };
  }
}
