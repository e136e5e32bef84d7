/** Playback of a finished story package.
 *
 * The manifest drives one tile per segment (paragraph text, video,
 * music) plus a whole-story narration track. Asset availability is
 * pre-flighted at load: a dangling asset reference degrades its own
 * tile and nothing else.
 */

import { StoryServiceClient } from "./client.js";
import type { ManifestJson } from "./types.js";

export type TileStatus = "ok" | "error";

export interface TileView {
  index: number;
  paragraph: string;
  scenePrompt: string;
  composition: string;
  videoUrl: string | null;
  musicUrl: string | null;
  status: TileStatus;
  selected: boolean;
}

export class PlaybackController {
  private selected = 0;
  private narrationPositionSeconds = 0;

  private constructor(
    private readonly manifest: ManifestJson,
    private readonly tileData: Omit<TileView, "selected">[],
    private readonly narrationOk: boolean,
    private readonly client: StoryServiceClient,
  ) {}

  static async load(client: StoryServiceClient, manifestId: string): Promise<PlaybackController> {
    const manifest = await client.getManifest(manifestId);
    const tiles: Omit<TileView, "selected">[] = [];
    for (const segment of manifest.segments) {
      const videoOk = await client.artifactAvailable(segment.video_asset.asset_id);
      const musicOk = await client.artifactAvailable(segment.music_asset.asset_id);
      tiles.push({
        index: segment.index,
        paragraph: manifest.paragraphs[segment.index] ?? "",
        scenePrompt: segment.scene_prompt,
        composition: segment.composition,
        videoUrl: videoOk ? client.artifactUrl(segment.video_asset.asset_id) : null,
        musicUrl: musicOk ? client.artifactUrl(segment.music_asset.asset_id) : null,
        status: videoOk && musicOk ? "ok" : "error",
      });
    }
    const narrationOk = await client.artifactAvailable(manifest.narration.asset_id);
    return new PlaybackController(manifest, tiles, narrationOk, client);
  }

  storyId(): string {
    return this.manifest.story_id;
  }

  segmentCount(): number {
    return this.tileData.length;
  }

  tiles(): TileView[] {
    return this.tileData.map((tile) => ({ ...tile, selected: tile.index === this.selected }));
  }

  select(index: number): void {
    if (index < 0 || index >= this.tileData.length) {
      throw new Error(`segment ${index} out of range`);
    }
    this.selected = index;
  }

  selectedIndex(): number {
    return this.selected;
  }

  selectedParagraph(): string {
    return this.manifest.paragraphs[this.selected] ?? "";
  }

  narrationUrl(): string | null {
    return this.narrationOk ? this.client.artifactUrl(this.manifest.narration.asset_id) : null;
  }

  narrationPosition(): number {
    return this.narrationPositionSeconds;
  }

  setNarrationPosition(seconds: number): void {
    this.narrationPositionSeconds = Math.max(0, seconds);
  }
}
