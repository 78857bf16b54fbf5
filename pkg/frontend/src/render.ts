// HTML renderers: pure functions from state to markup strings. The app
// module mounts them; tests assert on the strings directly.

import type { ArgumentText, ProposalCard, ResultPayload } from "./api.js";
import type { BallotView } from "./ballot.js";
import { totalCost } from "./ballot.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function euros(cents: number): string {
  return cents % 100 === 0
    ? `€ ${cents / 100}`
    : `€ ${Math.floor(cents / 100)}.${String(cents % 100).padStart(2, "0")}`;
}

function argumentItems(entries: ArgumentText[], side: "pro" | "con"): string {
  const lead = side === "pro" ? "For this speaks:" : "Against this speaks:";
  return entries
    .map(
      (a) =>
        `<li class="argument ${side}" data-argument="${escapeHtml(a.id)}">` +
        `${lead} ${escapeHtml(a.text)}</li>`,
    )
    .join("");
}

/** Up to three arguments per side plus an expander when more exist and a
 * link back into the discussion. Hidden entirely when nothing was argued. */
export function renderArgumentPanel(
  card: Pick<ProposalCard, "id" | "pro" | "con" | "pro_total" | "con_total">,
  expanded = false,
): string {
  if (card.pro_total === 0 && card.con_total === 0) return "";
  const shownPro = expanded ? card.pro : card.pro.slice(0, 3);
  const shownCon = expanded ? card.con : card.con.slice(0, 3);
  const truncated = shownPro.length < card.pro_total || shownCon.length < card.con_total;
  const expander = truncated
    ? `<button data-action="list-all" data-id="${escapeHtml(card.id)}">` +
      `List all ${card.pro_total + card.con_total} arguments</button>`
    : "";
  return (
    `<div class="arguments" data-panel="${escapeHtml(card.id)}">` +
    `<ul>${argumentItems(shownPro, "pro")}${argumentItems(shownCon, "con")}</ul>` +
    expander +
    `<a class="discuss" data-action="discuss" data-id="${escapeHtml(card.id)}">Discuss</a>` +
    `</div>`
  );
}

function controls(id: string): string {
  const esc = escapeHtml(id);
  return (
    `<button data-action="up" data-id="${esc}" title="higher priority">&#9650;</button>` +
    `<button data-action="down" data-id="${esc}" title="lower priority">&#9660;</button>` +
    `<button data-action="unapprove" data-id="${esc}" title="remove">&#10005;</button>`
  );
}

export function renderRanked(view: BallotView): string {
  const items = view.ranked
    .map(
      (card, i) =>
        `<li class="card ranked" data-id="${escapeHtml(card.id)}">` +
        `<span class="rank">${i + 1}.</span> ` +
        `<span class="text">${escapeHtml(card.text)}</span> ` +
        `<span class="cost">${euros(card.cost)}</span> ` +
        controls(card.id) +
        `</li>`,
    )
    .join("");
  return (
    `<section class="priorities"><h2>Your priorities</h2>` +
    `<p class="hint">Sort descending: the top entry counts the most.</p>` +
    `<ol>${items}</ol></section>`
  );
}

export function renderAvailable(view: BallotView, panels: Record<string, boolean> = {}): string {
  const items = view.available
    .map(
      (card) =>
        `<li class="card available" data-id="${escapeHtml(card.id)}">` +
        `<button data-action="approve" data-id="${escapeHtml(card.id)}" title="approve">&#128077;</button> ` +
        `<span class="text">${escapeHtml(card.text)}</span> ` +
        `<span class="cost">${euros(card.cost)}</span>` +
        renderArgumentPanel(card, panels[card.id] ?? false) +
        `</li>`,
    )
    .join("");
  return (
    `<section class="others"><h2>Other proposals</h2>` +
    `<p class="hint">Approve the proposals that matter to you and leave the rest.</p>` +
    `<ul>${items}</ul></section>`
  );
}

/** Over-budget totals are information, never a blocker: choosing more than
 * fits is allowed and the tally sorts it out. */
export function renderBudgetInfo(view: BallotView, budgetCents: number): string {
  const total = totalCost(view);
  const over = total > budgetCents;
  return (
    `<p class="budget-info${over ? " over" : ""}">` +
    `Selected: ${euros(total)} of ${euros(budgetCents)} available.` +
    (over ? " You chose more than the budget holds; that is fine, the vote decides what fits." : "") +
    `</p>`
  );
}

export function renderPhaseBanner(phase: string): string {
  const text =
    phase === "voting"
      ? "Voting is open."
      : phase === "closed"
        ? "Voting has closed."
        : "Voting has not started yet; your ballot is kept locally.";
  return `<p class="phase-banner" data-phase="${escapeHtml(phase)}">${text}</p>`;
}

/** Shown instead of any live tally while the vote is still running. */
export function renderHiddenResults(): string {
  return (
    `<section class="results hidden-results">` +
    `<h2>Results are hidden</h2>` +
    `<p>The standings stay hidden until voting closes, so what others chose ` +
    `cannot influence your own ballot. Check back after the voting phase ends.</p>` +
    `</section>`
  );
}

export function renderResults(result: ResultPayload, titles: Record<string, string> = {}): string {
  const maxBorda = Math.max(1, ...result.ranking.map((id) => result.rows[id]?.borda ?? 0));
  const rows = result.ranking
    .map((id) => {
      const row = result.rows[id];
      const winner = result.winners.includes(id);
      const width = Math.round(((row?.borda ?? 0) / maxBorda) * 100);
      return (
        `<li class="result${winner ? " winner" : ""}" data-id="${escapeHtml(id)}">` +
        `<span class="text">${escapeHtml(titles[id] ?? id)}</span>` +
        `<span class="bar" style="width:${width}%"></span>` +
        `<span class="score">${row?.borda ?? 0} points, ${row?.approval ?? 0} approvals</span>` +
        (winner ? `<span class="flag">funded</span>` : "") +
        `</li>`
      );
    })
    .join("");
  return (
    `<section class="results"><h2>Results</h2><ol>${rows}</ol>` +
    `<p class="spending">${euros(result.spent)} of ${euros(result.budget)} allocated, ` +
    `${euros(result.leftover)} left over.</p></section>`
  );
}

export function renderUnsavedIndicator(unsaved: boolean): string {
  return unsaved
    ? `<p class="unsaved">Unsaved changes — submit to make them count.</p>`
    : "";
}
