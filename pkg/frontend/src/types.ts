/** Wire types shared with the story service's JSON API. */

export type PhaseName =
  | "exposition"
  | "rising action"
  | "climax"
  | "falling action"
  | "resolution";

export const PHASES: PhaseName[] = [
  "exposition",
  "rising action",
  "climax",
  "falling action",
  "resolution",
];

export type AnimationStyle = "cartoon" | "anime" | "animated";

export const AGE_BAND = "7 to 12 (3rd to 6th graders)";

export interface CatalogFunction {
  id: number;
  name: string;
  phase: PhaseName;
  card_text: string;
  questions: string[];
}

export interface CardAnswerJson {
  function_id: number;
  answers: string[];
}

export interface PhaseInputJson {
  phase: PhaseName;
  cards: CardAnswerJson[];
}

export interface BriefJson {
  animation_style: AnimationStyle;
  age_band: string;
  phase_inputs: PhaseInputJson[];
}

export interface SessionJson {
  id: string;
  current_phase: number;
  complete: boolean;
  phase_inputs: PhaseInputJson[];
}

export type JobState =
  | "queued"
  | "writing"
  | "reviewing"
  | "directing"
  | "rendering"
  | "assembling"
  | "done"
  | "failed";

export interface JobProgress {
  segments_total: number;
  directed: number;
  videos: number;
  music: number;
  narration: number;
}

export interface JobJson {
  id: string;
  state: JobState;
  state_history: JobState[];
  progress: JobProgress;
  error: { stage: string; message: string } | null;
  package_ref: string | null;
}

export interface AssetRef {
  asset_id: string;
  format: string;
  duration: number;
}

export interface ManifestSegment {
  index: number;
  scene_prompt: string;
  composition: string;
  video_asset: AssetRef;
  music_asset: AssetRef;
}

export interface ManifestJson {
  story_id: string;
  style: AnimationStyle;
  paragraphs: string[];
  narration: AssetRef;
  segments: ManifestSegment[];
  verdicts: { round: number; is_appropriate: boolean; reasoning: string }[];
  models: Record<string, string>;
}

/** Validation issue as the service reports it (HTTP 422 body). */
export interface ServerIssue {
  message: string;
  phase: number | null;
  function_id: number | null;
}
