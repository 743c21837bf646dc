/** App shell: session picker plus the three tabs (wizard, results,
 * sensitivity). Completing the wizard jumps to results; incomplete sessions
 * bounce back to the wizard. */

import { ApiError, Client } from "./api.js";
import { LocalStorageDraftStore } from "./drafts.js";
import { renderResults } from "./results.js";
import { renderSensitivity } from "./sensitivity.js";
import type { SessionInfo } from "./types.js";
import { renderWizard } from "./wizard_view.js";

type Tab = "wizard" | "results" | "sensitivity";

const client = new Client("");
const drafts = new LocalStorageDraftStore(window.localStorage);

const tabs = document.getElementById("tabs")!;
const view = document.getElementById("view")!;
const picker = document.getElementById("session-picker") as HTMLSelectElement;
const reloadButton = document.getElementById("reload-sessions")!;
const saveButton = document.getElementById("save-session")!;

let current: SessionInfo | null = null;
let tab: Tab = "wizard";

async function refreshSessions(): Promise<void> {
  const sessions = await client.listSessions();
  picker.replaceChildren();
  for (const session of sessions) {
    const option = document.createElement("option");
    option.value = session.id;
    option.textContent = `${session.name} (${session.id.slice(0, 8)}…)` +
      (session.complete ? "" : " — incomplete");
    picker.appendChild(option);
  }
  if (sessions.length && !current) {
    await selectSession(sessions[0].id);
  }
}

async function selectSession(id: string): Promise<void> {
  current = await client.session(id);
  picker.value = id;
  tab = current.complete ? "results" : "wizard";
  render();
}

function setTab(next: Tab): void {
  tab = next;
  render();
}

function render(): void {
  for (const button of tabs.querySelectorAll("button[data-tab]")) {
    button.classList.toggle("active",
      (button as HTMLElement).dataset.tab === tab);
  }
  view.replaceChildren();
  if (!current) {
    view.textContent = "No session. Start the service with a preloaded model " +
      "(tahp serve --fixture) or create one via POST /sessions.";
    return;
  }
  const info = current;
  if (tab === "wizard") {
    renderWizard(view, client, info, drafts, () => {
      void selectSession(info.id);
    });
    return;
  }
  if (tab === "results") {
    void client.results(info.id).then(
      (payload) => renderResults(view, payload),
      (err) => {
        if (err instanceof ApiError && err.status === 409) {
          view.textContent = "Judgments incomplete — redirecting to the wizard.";
          setTab("wizard");
        } else {
          view.textContent = String(err);
        }
      });
    return;
  }
  renderSensitivity(view, client, info);
}

tabs.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.dataset.tab) setTab(target.dataset.tab as Tab);
});
picker.addEventListener("change", () => void selectSession(picker.value));
reloadButton.addEventListener("click", () => void refreshSessions());
saveButton.addEventListener("click", () => {
  if (current) void client.save(current.id);
});

void refreshSessions();
