/**
 * Wire types for the run-store HTTP API.
 *
 * Everything the console knows about a run arrives either as a JSON
 * response or as one NDJSON trace event; the schemas here are the only
 * place those shapes are parsed.
 */

import { z } from "zod";

export const EVENT_KINDS = [
  "turn",
  "action",
  "observation",
  "summary",
  "feedback",
  "control",
  "state_change",
] as const;

export type EventKind = (typeof EVENT_KINDS)[number];

export const TERMINAL_STATUSES = [
  "completed",
  "budget_exhausted",
  "aborted",
  "failed",
] as const;

export function isTerminalStatus(status: string): boolean {
  return (TERMINAL_STATUSES as readonly string[]).includes(status);
}

export const traceEventSchema = z.object({
  kind: z.enum(EVENT_KINDS),
  payload: z.record(z.unknown()),
  seq: z.number().int().positive(),
  ts: z.number(),
});

export type TraceEvent = z.infer<typeof traceEventSchema>;

export const runSummarySchema = z.object({
  run_id: z.string(),
  title: z.string(),
  status: z.string(),
  created_at: z.number(),
  // only the single-run endpoint reports the trace tail
  last_seq: z.number().int().nonnegative().optional(),
});

export type RunSummary = z.infer<typeof runSummarySchema>;

export const runListSchema = z.object({
  runs: z.array(runSummarySchema),
});

export const errorBodySchema = z.object({
  error: z.object({
    code: z.string(),
    message: z.string(),
  }),
});

export const feedbackAckSchema = z.object({
  queued: z.literal(true),
  run_id: z.string(),
});

export const controlAckSchema = z.object({
  run_id: z.string(),
  action: z.string(),
  status: z.string(),
});

export type ControlAction = "pause" | "resume" | "abort";
