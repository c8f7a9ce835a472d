/**
 * Browser entry point. Everything interesting lives in model.ts and
 * render.ts; this file only wires DOM events to the api client.
 */

import { ConsoleApi } from "./api.js";
import { RunFollower, RunListModel } from "./model.js";
import { renderRunList, renderRunPage } from "./render.js";

const params = new URLSearchParams(window.location.search);
const api = new ConsoleApi(params.get("api") ?? "", {
  token: params.get("token") ?? undefined,
});

const listEl = document.getElementById("run-list") as HTMLElement;
const runEl = document.getElementById("run-view") as HTMLElement;
const controlsEl = document.getElementById("controls") as HTMLElement;

const list = new RunListModel();
let follower: RunFollower | null = null;
let followAbort: AbortController | null = null;

async function refreshList(): Promise<void> {
  try {
    list.applyList(await api.listRuns());
  } catch (exc) {
    list.applyError(exc instanceof Error ? exc.message : String(exc));
  }
  listEl.innerHTML = renderRunList(list);
}

function paintRun(): void {
  if (!follower) {
    runEl.innerHTML = "";
    controlsEl.innerHTML = "";
    return;
  }
  const draft = runEl.querySelector<HTMLTextAreaElement>("textarea[name=text]");
  if (draft) follower.setDraft(draft.value);
  runEl.innerHTML = renderRunPage(follower);
  controlsEl.innerHTML = follower.isTerminal
    ? ""
    : `<button data-act="pause">pause</button>` +
      `<button data-act="resume">resume</button>` +
      `<button data-act="abort">abort</button>`;
}

function openRun(runId: string): void {
  followAbort?.abort();
  followAbort = new AbortController();
  follower = new RunFollower(runId);
  paintRun();
  void api
    .follow(
      runId,
      (event) => {
        follower?.ingest(event);
        list.noteSeq(runId, event.seq);
        if (follower?.status) list.noteStatus(runId, follower.status);
        listEl.innerHTML = renderRunList(list);
        paintRun();
      },
      { signal: followAbort.signal },
    )
    .catch(() => {});
}

function route(): void {
  const match = /^#run\/(.+)$/.exec(window.location.hash);
  if (match && match[1]) openRun(match[1]);
}

runEl.addEventListener("submit", (event) => {
  event.preventDefault();
  if (!follower) return;
  const form = event.target as HTMLFormElement;
  const text = (form.elements.namedItem("text") as HTMLTextAreaElement).value;
  const inReplyTo = form.dataset["replyTo"];
  void api
    .postFeedback(follower.runId, {
      author: "console",
      text,
      inReplyTo: inReplyTo ? Number(inReplyTo) : undefined,
    })
    .then(() => {
      follower?.clearComposer();
      paintRun();
    })
    .catch((exc) => window.alert(String(exc)));
});

controlsEl.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset["act"];
  if (!follower || !action) return;
  if (action === "pause" || action === "resume" || action === "abort") {
    // fire the request; the UI only changes once the stream confirms it
    void api.postControl(follower.runId, action).catch((exc) => window.alert(String(exc)));
  }
});

listEl.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.dataset["act"] === "reload") void refreshList();
});

window.addEventListener("hashchange", route);
void refreshList();
window.setInterval(() => void refreshList(), 5000);
route();
