/** Five-phase card wizard.
 *
 * The controller owns one authoring session and walks it strictly
 * forward: only the current phase's cards are offered, Next stays
 * disabled until every selected card's questions are answered, and
 * completed phases can be revisited read-only. Out-of-order submission
 * is impossible by construction: the controller only ever submits the
 * phase the server expects next.
 */

import { ApiError, StoryServiceClient } from "./client.js";
import {
  AGE_BAND,
  PHASES,
  type AnimationStyle,
  type BriefJson,
  type CatalogFunction,
  type JobJson,
  type PhaseInputJson,
  type PhaseName,
  type SessionJson,
} from "./types.js";

export interface CardFormQuestion {
  text: string;
  answer: string;
  message: string | null;
}

export interface CardView {
  functionId: number;
  name: string;
  cardText: string;
  selected: boolean;
  questions: CardFormQuestion[];
}

export interface WizardView {
  sessionId: string;
  phase: number;
  phaseName: PhaseName;
  complete: boolean;
  cards: CardView[];
  canAdvance: boolean;
  messages: string[];
  banner: string | null;
  readOnly: boolean;
}

interface Draft {
  selection: number[]; // selection order preserved
  answers: Map<number, string[]>;
  cardMessages: Map<number, string[]>;
}

export class WizardController {
  private session: SessionJson;
  private draft: Draft = { selection: [], answers: new Map(), cardMessages: new Map() };
  private bannerText: string | null = null;
  private viewingPhase: number;

  private constructor(
    private readonly client: StoryServiceClient,
    private readonly catalog: CatalogFunction[],
    session: SessionJson,
  ) {
    this.session = session;
    this.viewingPhase = session.current_phase;
  }

  static async start(client: StoryServiceClient): Promise<WizardController> {
    const [catalog, session] = await Promise.all([client.getCatalog(), client.createSession()]);
    return new WizardController(client, catalog.functions, session);
  }

  get sessionId(): string {
    return this.session.id;
  }

  currentPhase(): number {
    return this.session.current_phase;
  }

  complete(): boolean {
    return this.session.complete;
  }

  /** Back-navigation: any phase up to the current one may be viewed. */
  goToPhase(phase: number): void {
    if (phase < 1 || phase > this.session.current_phase) {
      throw new Error(`cannot navigate to phase ${phase}`);
    }
    this.viewingPhase = phase;
  }

  private phaseName(phase: number): PhaseName {
    return PHASES[phase - 1];
  }

  private isReadOnly(): boolean {
    return this.session.complete || this.viewingPhase < this.session.current_phase;
  }

  cardsForViewedPhase(): CatalogFunction[] {
    const name = this.phaseName(this.viewingPhase);
    return this.catalog.filter((fn) => fn.phase === name);
  }

  private functionById(functionId: number): CatalogFunction {
    const fn = this.catalog.find((entry) => entry.id === functionId);
    if (fn === undefined) throw new Error(`unknown function ${functionId}`);
    return fn;
  }

  toggleCard(functionId: number): void {
    if (this.isReadOnly()) throw new Error("this phase is read-only");
    const fn = this.functionById(functionId);
    if (fn.phase !== this.phaseName(this.session.current_phase)) {
      throw new Error(`function ${functionId} is not part of the current phase`);
    }
    const index = this.draft.selection.indexOf(functionId);
    if (index >= 0) {
      this.draft.selection.splice(index, 1);
      this.draft.answers.delete(functionId);
      this.draft.cardMessages.delete(functionId);
    } else {
      this.draft.selection.push(functionId);
      this.draft.answers.set(functionId, fn.questions.map(() => ""));
    }
  }

  setAnswer(functionId: number, questionIndex: number, text: string): void {
    if (this.isReadOnly()) throw new Error("this phase is read-only");
    const answers = this.draft.answers.get(functionId);
    if (answers === undefined) throw new Error(`card ${functionId} is not selected`);
    if (questionIndex < 0 || questionIndex >= answers.length) {
      throw new Error(`question ${questionIndex} out of range`);
    }
    answers[questionIndex] = text;
    this.draft.cardMessages.delete(functionId);
  }

  /** Next is enabled only when >=1 card is selected and every answer is filled. */
  canAdvance(): boolean {
    if (this.isReadOnly()) return false;
    if (this.draft.selection.length === 0) return false;
    return this.draft.selection.every((id) =>
      (this.draft.answers.get(id) ?? []).every((answer) => answer.trim() !== ""),
    );
  }

  validationMessages(): string[] {
    const messages: string[] = [];
    if (this.draft.selection.length === 0) {
      messages.push("Pick at least one story card to go on.");
    }
    for (const id of this.draft.selection) {
      const fn = this.functionById(id);
      const answers = this.draft.answers.get(id) ?? [];
      answers.forEach((answer, index) => {
        if (answer.trim() === "") {
          messages.push(`${fn.name}: answer question ${index + 1} to go on.`);
        }
      });
      for (const serverMessage of this.draft.cardMessages.get(id) ?? []) {
        messages.push(`${fn.name}: ${serverMessage}`);
      }
    }
    return messages;
  }

  banner(): string | null {
    return this.bannerText;
  }

  private draftPhaseInput(): PhaseInputJson {
    return {
      phase: this.phaseName(this.session.current_phase),
      cards: this.draft.selection.map((id) => ({
        function_id: id,
        answers: [...(this.draft.answers.get(id) ?? [])],
      })),
    };
  }

  /** Submit the current phase. Returns true when the wizard advanced. */
  async submitAndAdvance(): Promise<boolean> {
    this.bannerText = null;
    if (!this.canAdvance()) return false;
    try {
      this.session = await this.client.submitPhase(this.session.id, this.draftPhaseInput());
    } catch (error) {
      if (error instanceof ApiError) {
        // map field errors to their cards; anything else is a banner
        let mapped = false;
        for (const issue of error.issues) {
          if (issue.function_id !== null && this.draft.answers.has(issue.function_id)) {
            const existing = this.draft.cardMessages.get(issue.function_id) ?? [];
            existing.push(issue.message);
            this.draft.cardMessages.set(issue.function_id, existing);
            mapped = true;
          }
        }
        if (!mapped) this.bannerText = error.message;
        return false;
      }
      throw error;
    }
    this.draft = { selection: [], answers: new Map(), cardMessages: new Map() };
    this.viewingPhase = this.session.current_phase;
    return true;
  }

  /** The brief exactly as the service materializes it (wire form). */
  brief(style: AnimationStyle): BriefJson {
    if (!this.session.complete) throw new Error("the wizard is not finished yet");
    return {
      animation_style: style,
      age_band: AGE_BAND,
      phase_inputs: this.session.phase_inputs,
    };
  }

  async launchGeneration(style: AnimationStyle): Promise<JobJson> {
    if (!this.session.complete) throw new Error("the wizard is not finished yet");
    return this.client.createJob({
      session_id: this.session.id,
      overrides: { animation_style: style },
    });
  }

  view(): WizardView {
    const readOnly = this.isReadOnly();
    const submitted = this.session.phase_inputs[this.viewingPhase - 1];
    const cards = this.cardsForViewedPhase().map((fn) => {
      const selected = readOnly
        ? (submitted?.cards.some((card) => card.function_id === fn.id) ?? false)
        : this.draft.selection.includes(fn.id);
      const answers = readOnly
        ? (submitted?.cards.find((card) => card.function_id === fn.id)?.answers ?? [])
        : (this.draft.answers.get(fn.id) ?? []);
      const cardMessages = readOnly ? [] : (this.draft.cardMessages.get(fn.id) ?? []);
      const questions = fn.questions.map((text, index) => {
        const answer = answers[index] ?? "";
        let message: string | null = null;
        if (!readOnly && selected && answer.trim() === "") {
          message = "Please answer this question.";
        } else if (index === 0 && cardMessages.length > 0) {
          message = cardMessages[0];
        }
        return { text, answer, message };
      });
      return {
        functionId: fn.id,
        name: fn.name,
        cardText: fn.card_text,
        selected,
        questions,
      };
    });
    return {
      sessionId: this.session.id,
      phase: this.viewingPhase,
      phaseName: this.phaseName(this.viewingPhase),
      complete: this.session.complete,
      cards,
      canAdvance: this.canAdvance() && this.viewingPhase === this.session.current_phase,
      messages: readOnly ? [] : this.validationMessages(),
      banner: this.bannerText,
      readOnly,
    };
  }
}
