/**
 * Thin client for the run-store API.
 *
 * One class, five calls: list runs, fetch one, stream trace events as
 * NDJSON, post feedback, post a control action. Non-2xx responses carry
 * a machine-readable {error: {code, message}} body which surfaces here
 * as ApiError, so callers can branch on the code instead of the text.
 */

import {
  controlAckSchema,
  errorBodySchema,
  feedbackAckSchema,
  isTerminalStatus,
  runListSchema,
  runSummarySchema,
  traceEventSchema,
  type ControlAction,
  type RunSummary,
  type TraceEvent,
} from "./types.js";

const TOKEN_HEADER = "x-labloop-token";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface FeedbackDraft {
  author: string;
  text: string;
  inReplyTo?: number | null;
}

export interface ConsoleApiOptions {
  token?: string;
  // injectable for tests; defaults to the global fetch
  fetchFn?: typeof fetch;
}

export class ConsoleApi {
  private readonly baseUrl: string;
  private readonly token?: string;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl: string, options: ConsoleApiOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.token = options.token;
    // calling an unbound window.fetch throws in browsers, so wrap it
    this.fetchFn = options.fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private headers(json = false): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["content-type"] = "application/json";
    if (this.token) headers[TOKEN_HEADER] = this.token;
    return headers;
  }

  private async request(path: string, init: RequestInit = {}): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body: unknown = await response.json();
    if (!response.ok) {
      const parsed = errorBodySchema.safeParse(body);
      if (parsed.success) {
        throw new ApiError(
          response.status,
          parsed.data.error.code,
          parsed.data.error.message,
        );
      }
      throw new ApiError(response.status, "unexpected", `HTTP ${response.status}`);
    }
    return body;
  }

  async listRuns(): Promise<RunSummary[]> {
    const body = await this.request("/runs", { headers: this.headers() });
    return runListSchema.parse(body).runs;
  }

  async getRun(runId: string): Promise<RunSummary> {
    const body = await this.request(`/runs/${runId}`, { headers: this.headers() });
    return runSummarySchema.parse(body);
  }

  async postFeedback(runId: string, draft: FeedbackDraft) {
    if (!draft.text.trim()) {
      // blocked client-side; the server would 400 it anyway
      throw new ApiError(0, "empty_text", "feedback text must not be empty");
    }
    const body = await this.request(`/runs/${runId}/feedback`, {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify({
        author: draft.author,
        text: draft.text,
        in_reply_to: draft.inReplyTo ?? null,
      }),
    });
    return feedbackAckSchema.parse(body);
  }

  async postControl(runId: string, action: ControlAction) {
    const body = await this.request(`/runs/${runId}/control`, {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify({ action }),
    });
    return controlAckSchema.parse(body);
  }

  /**
   * Stream trace events from `fromSeq` onward, one parsed event per
   * iteration. The server ends the stream once the run is terminal.
   */
  async *streamEvents(
    runId: string,
    fromSeq = 1,
    signal?: AbortSignal,
  ): AsyncGenerator<TraceEvent> {
    const response = await this.fetchFn(
      `${this.baseUrl}/runs/${runId}/events?from=${fromSeq}`,
      { headers: this.headers(), signal },
    );
    if (!response.ok) {
      const body: unknown = await response.json();
      const parsed = errorBodySchema.safeParse(body);
      throw new ApiError(
        response.status,
        parsed.success ? parsed.data.error.code : "unexpected",
        parsed.success ? parsed.data.error.message : `HTTP ${response.status}`,
      );
    }
    if (!response.body) return;
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffered = "";
    try {
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buffered += decoder.decode(value, { stream: true });
        let newline;
        while ((newline = buffered.indexOf("\n")) >= 0) {
          const line = buffered.slice(0, newline).trim();
          buffered = buffered.slice(newline + 1);
          if (line) yield traceEventSchema.parse(JSON.parse(line));
        }
      }
    } finally {
      reader.releaseLock();
    }
  }

  /**
   * Follow a run to its end: stream events into `onEvent`, reconnecting
   * after a dropped connection and resuming from the last seen seq.
   * Resolves with the last seq once a terminal state_change streamed.
   */
  async follow(
    runId: string,
    onEvent: (event: TraceEvent) => void,
    options: { fromSeq?: number; signal?: AbortSignal; retryMs?: number } = {},
  ): Promise<number> {
    let nextSeq = options.fromSeq ?? 1;
    const retryMs = options.retryMs ?? 1000;
    for (;;) {
      let sawTerminal = false;
      for await (const event of this.streamEvents(runId, nextSeq, options.signal)) {
        nextSeq = event.seq + 1;
        if (
          event.kind === "state_change" &&
          typeof event.payload["status"] === "string" &&
          isTerminalStatus(event.payload["status"] as string)
        ) {
          sawTerminal = true;
        }
        onEvent(event);
      }
      if (sawTerminal || options.signal?.aborted) return nextSeq - 1;
      await new Promise((resolve) => setTimeout(resolve, retryMs));
    }
  }
}
