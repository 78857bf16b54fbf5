// DOM wiring: one interaction loop around the pure state and renderers.
// At most one submit is in flight; stale list responses are discarded by
// sequence tag; the server echo is the authoritative ballot state.

import { ApiError, Client, type IssueSummary, type ProposalCard } from "./api.js";
import {
  approve,
  fromProposals,
  move,
  serialize,
  unapprove,
  type BallotView,
} from "./ballot.js";
import {
  renderAvailable,
  renderBudgetInfo,
  renderHiddenResults,
  renderPhaseBanner,
  renderRanked,
  renderResults,
  renderUnsavedIndicator,
  escapeHtml,
} from "./render.js";

/** The results view either explains the hiding or shows the tally; no
 * number on screen is ever computed client-side. */
export async function resultsHtml(
  client: Client,
  issueId: string,
  titles: Record<string, string> = {},
): Promise<string> {
  const issue = await client.getIssue(issueId);
  if (!issue.results_visible) return renderHiddenResults();
  return renderResults(await client.getResult(issueId), titles);
}

interface AppState {
  issue: IssueSummary;
  view: BallotView;
  seed: number;
  cards: ProposalCard[];
  expandedPanels: Record<string, boolean>;
  unsaved: boolean;
  submitting: boolean;
  notice: string;
  offendingId: string | null;
}

export class App {
  private state!: AppState;
  private requestTag = 0;

  constructor(
    private root: HTMLElement,
    private client: Client,
    private issueId: string,
    private discussBase = "/discuss",
  ) {}

  async start(): Promise<void> {
    const issue = await this.client.getIssue(this.issueId);
    const list = await this.client.getProposals(this.issueId);
    this.state = {
      issue,
      view: fromProposals(list.proposals),
      seed: list.seed,
      cards: list.proposals,
      expandedPanels: {},
      unsaved: false,
      submitting: false,
      notice: "",
      offendingId: null,
    };
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.render();
  }

  private onClick(event: Event): void {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action!;
    const id = target.dataset.id ?? "";
    if (action === "approve") this.updateView(approve(this.state.view, id));
    else if (action === "unapprove") this.updateView(unapprove(this.state.view, id));
    else if (action === "up" || action === "down") this.updateView(move(this.state.view, id, action));
    else if (action === "submit") void this.submit();
    else if (action === "list-all") void this.expandPanel(id);
    else if (action === "discuss") window.open(`${this.discussBase}/${id}`, "_blank");
    else if (action === "show-results") void this.showResults();
  }

  private updateView(view: BallotView): void {
    if (view === this.state.view) return;
    this.state.view = view;
    this.state.unsaved = true;
    this.state.offendingId = null;
    this.render();
  }

  private async submit(): Promise<void> {
    if (this.state.submitting) return;
    this.state.submitting = true;
    this.state.notice = "";
    this.render();
    try {
      const echo = await this.client.putBallot(this.issueId, serialize(this.state.view));
      // the echo is what the server now holds; rebuild from it
      this.state.view = fromProposals(this.state.cards, echo.preferences);
      this.state.unsaved = false;
      this.state.notice = `Ballot saved (revision ${echo.sequence}). You can change it at any time while voting is open.`;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state.notice = "Voting is not open right now; your ballot is kept locally.";
      } else if (error instanceof ApiError && error.status === 422) {
        this.state.notice = `The server rejected the ballot: ${error.message}`;
        const details = error.details as { duplicates?: string[] } | undefined;
        this.state.offendingId = details?.duplicates?.[0] ?? null;
      } else {
        this.state.notice = "Could not reach the server. Your choices are kept; try submitting again.";
      }
    } finally {
      this.state.submitting = false;
      this.render();
    }
  }

  private async expandPanel(proposalId: string): Promise<void> {
    const tag = ++this.requestTag;
    let lists;
    try {
      lists = await this.client.getArguments(proposalId, { all: true, seed: this.state.seed });
    } catch {
      // the expander stays in place, so clicking it again retries
      this.state.notice = "Could not load the arguments; try again.";
      this.render();
      return;
    }
    if (tag !== this.requestTag) return; // a newer request superseded this one
    this.state.cards = this.state.cards.map((c) =>
      c.id === proposalId ? { ...c, pro: lists.pro, con: lists.con } : c,
    );
    this.state.view = fromProposals(this.state.cards, serialize(this.state.view));
    this.state.expandedPanels[proposalId] = true;
    this.render();
  }

  private async showResults(): Promise<void> {
    const titles = Object.fromEntries(this.state.cards.map((c) => [c.id, c.text]));
    const body = await resultsHtml(this.client, this.issueId, titles);
    this.root.querySelector(".results-slot")!.innerHTML = body;
  }

  private render(): void {
    const s = this.state;
    this.root.innerHTML =
      `<h1>${escapeHtml(s.issue.title)}</h1>` +
      renderPhaseBanner(s.issue.phase) +
      (s.notice ? `<p class="notice">${escapeHtml(s.notice)}</p>` : "") +
      renderUnsavedIndicator(s.unsaved) +
      renderRanked(s.view) +
      renderBudgetInfo(s.view, s.issue.budget) +
      `<button data-action="submit" ${s.submitting ? "disabled" : ""}>Submit ballot</button>` +
      renderAvailable(s.view, s.expandedPanels) +
      `<button data-action="show-results">Show results</button>` +
      `<div class="results-slot"></div>`;
    if (s.offendingId) {
      this.root
        .querySelector(`.card[data-id="${s.offendingId}"]`)
        ?.classList.add("offending");
    }
  }
}

export function mount(options: {
  root: HTMLElement;
  baseUrl: string;
  token: string;
  issueId: string;
}): App {
  const app = new App(options.root, new Client(options.baseUrl, options.token), options.issueId);
  void app.start();
  return app;
}
