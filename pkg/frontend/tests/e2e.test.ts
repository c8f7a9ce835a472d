/**
 * End-to-end checks against the real run store: spawn the Python CLI in
 * serve mode with a scripted session whose first move is a help request,
 * then drive the console client against it over HTTP.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, expect, it } from "vitest";

import { ConsoleApi } from "../src/api.js";
import { RunFollower } from "../src/model.js";

const REPO_ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");
const TASK_DIR = path.join(REPO_ROOT, "src", "labloop", "fixtures", "task_toy_linear");
const TOKEN = "e2e-secret";
const GUIDANCE = "Try a learning rate of 0.01 and rerun the training script.";

function turn(action: string, input: Record<string, unknown>): string {
  return (
    "Reflection: the last observation was fine.\n" +
    "Research Plan and Status: keep following the plan.\n" +
    "Fact Check: nothing new to check.\n" +
    "Thought: take the next step.\n" +
    "Questions:\n" +
    `Action: ${action}\n` +
    `Action Input: ${JSON.stringify(input)}\n`
  );
}

const SUMMARY =
  "[Reasoning]: waited for guidance before touching anything\n" +
  "[Action]: asked the human which setting to try\n" +
  "[Observation]: a reply arrived with a concrete suggestion\n" +
  "[Feedback]: none\n";

const SESSION = [
  { reply: turn("Request Help", { request: "Which learning rate should I try next?" }) },
  { reply: SUMMARY },
  { reply: turn("Final Answer", { final_answer: "No change needed; the baseline stands." }) },
]
  .map((entry) => JSON.stringify(entry))
  .join("\n") + "\n";

interface Harness {
  child: ChildProcess;
  dir: string;
  api: ConsoleApi;
  logs: string[];
}

const harnesses: Harness[] = [];

afterEach(() => {
  for (const h of harnesses.splice(0)) {
    h.child.kill("SIGTERM");
    setTimeout(() => h.child.kill("SIGKILL"), 2000).unref();
    rmSync(h.dir, { recursive: true, force: true });
  }
});

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

function startServe(): Harness {
  const dir = mkdtempSync(path.join(tmpdir(), "labloop-e2e-"));
  const sessionPath = path.join(dir, "session.jsonl");
  writeFileSync(sessionPath, SESSION);
  const port = 20000 + Math.floor(Math.random() * 20000);
  const child = spawn(
    "python3",
    [
      "-m", "labloop.cli", "serve",
      "--host", "127.0.0.1",
      "--port", String(port),
      "--token", TOKEN,
      "--task", TASK_DIR,
      "--session", sessionPath,
      "--steps", "8",
      "--state-dir", path.join(dir, "state"),
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  const logs: string[] = [];
  child.stdout?.on("data", (chunk: Buffer) => logs.push(chunk.toString()));
  child.stderr?.on("data", (chunk: Buffer) => logs.push(chunk.toString()));
  const harness = {
    child,
    dir,
    api: new ConsoleApi(`http://127.0.0.1:${port}`, { token: TOKEN }),
    logs,
  };
  harnesses.push(harness);
  return harness;
}

async function waitForRun(h: Harness, deadlineMs = 30_000): Promise<string> {
  const deadline = Date.now() + deadlineMs;
  for (;;) {
    try {
      const runs = await h.api.listRuns();
      const first = runs[0];
      if (first) return first.run_id;
    } catch {
      // server still starting
    }
    if (Date.now() > deadline) {
      throw new Error(`run store never came up; logs:\n${h.logs.join("")}`);
    }
    await sleep(150);
  }
}

it(
  "streams a live run, answers its help request, and sees it complete",
  async () => {
    const h = startServe();
    const runId = await waitForRun(h);
    const follower = new RunFollower(runId);
    let helpSeq: number | null = null;
    let postError: unknown = null;

    const lastSeq = await h.api.follow(runId, (event) => {
      follower.ingest(event);
      if (follower.pendingHelp && helpSeq === null) {
        helpSeq = follower.pendingHelp.seq;
        void h.api
          .postFeedback(runId, {
            author: "e2e",
            text: GUIDANCE,
            inReplyTo: helpSeq,
          })
          .catch((exc: unknown) => {
            postError = exc;
          });
      }
    });

    expect(postError).toBeNull();
    // the stream confirmed every state we claim
    expect(follower.status).toBe("completed");
    expect(follower.isTerminal).toBe(true);
    expect(follower.pendingHelp).toBeNull();
    // seq order audited end to end, no gaps or replays
    expect(follower.auditIssues).toEqual([]);
    expect(follower.lastSeq).toBe(lastSeq);
    expect(helpSeq).not.toBeNull();
    // our reply came back through the trace and became the observation
    expect(follower.feedback).toEqual([{ author: "e2e", text: GUIDANCE, inReplyTo: helpSeq }]);
    const firstStep = follower.steps()[0];
    expect(firstStep?.actionName).toBe("Request Help");
    expect(firstStep?.observation).toBe(GUIDANCE);

    const runs = await h.api.listRuns();
    expect(runs.find((r) => r.run_id === runId)?.status).toBe("completed");
  },
  120_000,
);

it(
  "aborts a run parked on a help request and streams the terminal state",
  async () => {
    const h = startServe();
    const runId = await waitForRun(h);
    const follower = new RunFollower(runId);
    let sentAbort = false;

    await h.api.follow(runId, (event) => {
      follower.ingest(event);
      if (follower.pendingHelp && !sentAbort) {
        sentAbort = true;
        void h.api.postControl(runId, "abort").catch(() => {});
      }
    });

    expect(sentAbort).toBe(true);
    expect(follower.status).toBe("aborted");
    expect(follower.isTerminal).toBe(true);
    expect(follower.pendingHelp).toBeNull();
    expect(follower.auditIssues).toEqual([]);

    const runs = await h.api.listRuns();
    expect(runs.find((r) => r.run_id === runId)?.status).toBe("aborted");
  },
  120_000,
);
