/** Pure HTML renderers: view state in, markup string out. */

import type { TrackerView } from "./progress.js";
import type { TileView } from "./playback.js";
import type { WizardView } from "./wizard.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function renderPhaseScreen(view: WizardView): string {
  const cards = view.cards
    .map((card) => {
      const questions = card.selected
        ? card.questions
            .map((question, index) => {
              const message = question.message
                ? `<p class="inline-message">${escapeHtml(question.message)}</p>`
                : "";
              return (
                `<label>${escapeHtml(question.text)}` +
                `<textarea data-card="${card.functionId}" data-question="${index}">` +
                `${escapeHtml(question.answer)}</textarea></label>${message}`
              );
            })
            .join("")
        : "";
      const selectedClass = card.selected ? " selected" : "";
      return (
        `<article class="card${selectedClass}" data-card="${card.functionId}">` +
        `<h3>${escapeHtml(card.name)}</h3>` +
        `<p>${escapeHtml(card.cardText)}</p>` +
        `${questions}</article>`
      );
    })
    .join("");
  const messages = view.messages
    .map((message) => `<li>${escapeHtml(message)}</li>`)
    .join("");
  const banner = view.banner
    ? `<div class="banner" role="alert">${escapeHtml(view.banner)}</div>`
    : "";
  const nextDisabled = view.canAdvance ? "" : " disabled";
  return (
    `<section class="phase" data-phase="${view.phase}">` +
    banner +
    `<h2>Phase ${view.phase}: ${escapeHtml(view.phaseName)}</h2>` +
    `<div class="cards">${cards}</div>` +
    (messages ? `<ul class="messages">${messages}</ul>` : "") +
    `<button class="next"${nextDisabled}>Next</button>` +
    `</section>`
  );
}

export function renderProgress(view: TrackerView): string {
  const counters =
    view.segmentsTotal > 0
      ? `<p class="counters">videos ${view.videosDone}/${view.segmentsTotal} · ` +
        `music ${view.musicDone}/${view.segmentsTotal} · ` +
        `narration ${view.narrationDone ? "ready" : "…"}</p>`
      : "";
  const playback =
    view.playbackRef !== null
      ? `<a class="playback" href="#playback/${escapeHtml(view.playbackRef)}">Watch your story</a>`
      : "";
  return (
    `<section class="progress" data-state="${view.state}">` +
    `<p class="child-message">${escapeHtml(view.childMessage)}</p>` +
    counters +
    playback +
    `<details class="grown-ups"><summary>For grown-ups</summary>` +
    `<p>${escapeHtml(view.grownUpsDetail)}</p></details>` +
    `</section>`
  );
}

export function renderTiles(tiles: TileView[], narrationUrl: string | null): string {
  const tileMarkup = tiles
    .map((tile) => {
      const classes = ["tile", tile.status === "error" ? "tile-error" : "tile-ok"];
      if (tile.selected) classes.push("tile-selected");
      const media =
        tile.status === "ok"
          ? `<video src="${escapeHtml(tile.videoUrl ?? "")}" loop></video>` +
            `<audio src="${escapeHtml(tile.musicUrl ?? "")}"></audio>`
          : `<p class="tile-message">This scene is taking a nap. The rest of the story still works!</p>`;
      return (
        `<article class="${classes.join(" ")}" data-index="${tile.index}">` +
        `<p class="paragraph">${escapeHtml(tile.paragraph)}</p>${media}</article>`
      );
    })
    .join("");
  const narration =
    narrationUrl !== null
      ? `<audio class="narration" src="${escapeHtml(narrationUrl)}" controls></audio>`
      : "";
  return `<section class="playback">${narration}<div class="tiles">${tileMarkup}</div></section>`;
}
