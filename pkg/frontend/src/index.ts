export * from "./types.js";
export * from "./client.js";
export * from "./wizard.js";
export * from "./progress.js";
export * from "./playback.js";
export * from "./render.js";
