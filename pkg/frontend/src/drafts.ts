/** Local draft persistence: answers survive a page reload and are reconciled
 * against the session revision on reconnect. A draft answer whose pair is
 * still unanswered server-side gets resubmitted; one the server already has
 * (the revision moved past us) is dropped in favour of the server state. */

import type { JudgmentValue, SessionInfo } from "./types.js";
import type { Question } from "./wizard.js";
import { questionKey } from "./wizard.js";

export interface DraftAnswer {
  question: Question;
  value: JudgmentValue;
}

export interface Draft {
  revision: number;
  pending: DraftAnswer[];
}

export interface DraftStore {
  load(sessionId: string): Draft | null;
  save(sessionId: string, draft: Draft): void;
  clear(sessionId: string): void;
}

export function emptyDraft(revision: number): Draft {
  return { revision, pending: [] };
}

/** Record an answer the user gave that has not been acknowledged yet. */
export function recordDraft(draft: Draft, question: Question,
                            value: JudgmentValue): Draft {
  const key = questionKey(question);
  const pending = draft.pending.filter((d) => questionKey(d.question) !== key);
  pending.push({ question, value });
  return { ...draft, pending };
}

/** Drop a pending answer once the service acknowledged it. */
export function acknowledge(draft: Draft, question: Question,
                            revision: number): Draft {
  const key = questionKey(question);
  return {
    revision,
    pending: draft.pending.filter((d) => questionKey(d.question) !== key),
  };
}

export interface Reconciliation {
  /** still missing server-side: submit these */
  resubmit: DraftAnswer[];
  /** already answered server-side (revision moved on): superseded */
  dropped: DraftAnswer[];
}

export function reconcile(draft: Draft, info: SessionInfo): Reconciliation {
  const missing = new Set<string>();
  for (const ctx of info.contexts) {
    for (const [i, j] of ctx.missing) {
      missing.add(`${ctx.id}|${i}|${j}`);
      missing.add(`${ctx.id}|${j}|${i}`);
    }
  }
  const resubmit: DraftAnswer[] = [];
  const dropped: DraftAnswer[] = [];
  for (const answer of draft.pending) {
    (missing.has(questionKey(answer.question)) ? resubmit : dropped).push(answer);
  }
  return { resubmit, dropped };
}

const PREFIX = "tahp-draft:";

/** Browser-side store; tests use mapStore below instead. */
export class LocalStorageDraftStore implements DraftStore {
  constructor(private readonly storage: Storage) {}

  load(sessionId: string): Draft | null {
    const raw = this.storage.getItem(PREFIX + sessionId);
    return raw ? (JSON.parse(raw) as Draft) : null;
  }

  save(sessionId: string, draft: Draft): void {
    this.storage.setItem(PREFIX + sessionId, JSON.stringify(draft));
  }

  clear(sessionId: string): void {
    this.storage.removeItem(PREFIX + sessionId);
  }
}

/** In-memory store with the same round-trip semantics (JSON both ways). */
export function mapStore(): DraftStore {
  const entries = new Map<string, string>();
  return {
    load: (id) => {
      const raw = entries.get(PREFIX + id);
      return raw ? (JSON.parse(raw) as Draft) : null;
    },
    save: (id, draft) => void entries.set(PREFIX + id, JSON.stringify(draft)),
    clear: (id) => void entries.delete(PREFIX + id),
  };
}
