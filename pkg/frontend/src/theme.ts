/** Fixed color roles for outline highlighting. Four token classes, one
 * stable color each; panels read roles, never raw colors. */

export type TokenRole = "character" | "item" | "action" | "dialogue" | "plain";

export const TOKEN_COLORS: Record<TokenRole, string> = {
  character: "#e8b4d8",
  item: "#b4d8e8",
  action: "#f2d98c",
  dialogue: "#bfe3b4",
  plain: "transparent",
};

export const CANVAS = { width: 1600, height: 900 } as const;
