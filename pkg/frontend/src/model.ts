/**
 * View models for the console, kept free of DOM and network concerns.
 *
 * RunFollower folds a stream of trace events into what the transcript
 * view needs: step blocks, the confirmed run status, and any pending
 * help request. Two rules hold throughout: the event feed is audited
 * against seq order, and no state is claimed until a streamed
 * state_change confirms it (controls are never applied optimistically).
 */

import { isTerminalStatus, type RunSummary, type TraceEvent } from "./types.js";

export interface SeqAuditIssue {
  seq: number;
  expected: number;
  note: "gap" | "duplicate or reordered";
}

export interface StepSummaryView {
  reasoning: string;
  action: string;
  observation: string;
  feedback: string;
}

export interface StepBlock {
  step: number;
  turn?: string;
  actionName?: string;
  actionInput?: Record<string, unknown>;
  observation?: string;
  summary?: StepSummaryView;
}

export interface PendingHelp {
  seq: number;
  step: number;
  request: string;
}

export interface FeedbackNote {
  author: string;
  text: string;
  inReplyTo: number | null;
}

export interface ComposerState {
  draft: string;
  inReplyTo: number | null;
}

function asString(value: unknown, fallback = ""): string {
  return typeof value === "string" ? value : fallback;
}

function asNumber(value: unknown, fallback = 0): number {
  return typeof value === "number" ? value : fallback;
}

export class RunFollower {
  readonly runId: string;
  readonly events: TraceEvent[] = [];
  readonly auditIssues: SeqAuditIssue[] = [];
  readonly feedback: FeedbackNote[] = [];
  lastSeq = 0;
  /** Confirmed status; null until the first state_change streams in. */
  status: string | null = null;
  pendingHelp: PendingHelp | null = null;
  composer: ComposerState = { draft: "", inReplyTo: null };
  private readonly blocks = new Map<number, StepBlock>();

  constructor(runId: string) {
    this.runId = runId;
  }

  get isTerminal(): boolean {
    return this.status !== null && isTerminalStatus(this.status);
  }

  /** Step blocks in step order, ready for rendering. */
  steps(): StepBlock[] {
    return [...this.blocks.values()].sort((a, b) => a.step - b.step);
  }

  ingestAll(events: Iterable<TraceEvent>): void {
    for (const event of events) this.ingest(event);
  }

  ingest(event: TraceEvent): void {
    const expected = this.lastSeq + 1;
    if (event.seq <= this.lastSeq) {
      // replays happen on sloppy reconnects; record and skip, never unrender
      this.auditIssues.push({ seq: event.seq, expected, note: "duplicate or reordered" });
      return;
    }
    if (event.seq !== expected) {
      this.auditIssues.push({ seq: event.seq, expected, note: "gap" });
    }
    this.lastSeq = event.seq;
    this.events.push(event);
    this.apply(event);
  }

  private block(step: number): StepBlock {
    let block = this.blocks.get(step);
    if (!block) {
      block = { step };
      this.blocks.set(step, block);
    }
    return block;
  }

  private apply(event: TraceEvent): void {
    const payload = event.payload;
    switch (event.kind) {
      case "turn":
        this.block(asNumber(payload["step"])).turn = asString(payload["raw"]);
        break;
      case "action": {
        const block = this.block(asNumber(payload["step"]));
        block.actionName = asString(payload["name"]);
        block.actionInput = (payload["input"] ?? {}) as Record<string, unknown>;
        break;
      }
      case "observation":
        this.block(asNumber(payload["step"])).observation = asString(payload["text"]);
        break;
      case "summary":
        this.block(asNumber(payload["step"])).summary = {
          reasoning: asString(payload["reasoning"]),
          action: asString(payload["action"]),
          observation: asString(payload["observation"]),
          feedback: asString(payload["feedback"]),
        };
        break;
      case "feedback":
        this.feedback.push({
          author: asString(payload["author"]),
          text: asString(payload["text"]),
          inReplyTo:
            typeof payload["in_reply_to"] === "number"
              ? (payload["in_reply_to"] as number)
              : null,
        });
        break;
      case "state_change": {
        const status = asString(payload["status"]);
        if (!status) break;
        this.status = status;
        if (status === "awaiting_feedback") {
          this.pendingHelp = {
            seq: event.seq,
            step: asNumber(payload["step"]),
            request: asString(payload["request"]),
          };
        } else {
          // shown iff awaiting: any confirmed resume or end clears it
          this.pendingHelp = null;
        }
        break;
      }
      case "control":
        break;
    }
  }

  setDraft(text: string): void {
    this.composer.draft = text;
    this.composer.inReplyTo = this.pendingHelp ? this.pendingHelp.seq : null;
  }

  clearComposer(): void {
    this.composer = { draft: "", inReplyTo: null };
  }
}

export interface RunRow {
  runId: string;
  title: string;
  status: string;
  createdAt: number;
  lastSeq: number;
}

export class RunListModel {
  rows: RunRow[] = [];
  error: string | null = null;

  applyList(runs: RunSummary[]): void {
    this.error = null;
    this.rows = runs.map((run) => ({
      runId: run.run_id,
      title: run.title,
      status: run.status,
      createdAt: run.created_at,
      lastSeq: run.last_seq ?? this.rows.find((r) => r.runId === run.run_id)?.lastSeq ?? 0,
    }));
  }

  applyError(message: string): void {
    this.error = message;
  }

  /** Event-driven row update, so a finishing run flips without a reload. */
  noteStatus(runId: string, status: string): void {
    const row = this.rows.find((r) => r.runId === runId);
    if (row) row.status = status;
  }

  noteSeq(runId: string, seq: number): void {
    const row = this.rows.find((r) => r.runId === runId);
    if (row && seq > row.lastSeq) row.lastSeq = seq;
  }

  row(runId: string): RunRow | undefined {
    return this.rows.find((r) => r.runId === runId);
  }
}
