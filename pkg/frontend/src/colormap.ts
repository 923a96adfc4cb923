/**
 * Symmetric diverging colormap for quasi-probability fields: blue below
 * zero, white at zero, red above, so negativity regions are immediately
 * visible.  The scale is fixed per trajectory (caller supplies the global
 * max |value|), keeping frames comparable.
 */

export type Rgb = [number, number, number];

const NEGATIVE_END: Rgb = [5, 48, 97];      // deep blue
const POSITIVE_END: Rgb = [103, 0, 31];     // deep red
const CENTER: Rgb = [255, 255, 255];

function lerp(a: Rgb, b: Rgb, t: number): Rgb {
  return [
    Math.round(a[0] + (b[0] - a[0]) * t),
    Math.round(a[1] + (b[1] - a[1]) * t),
    Math.round(a[2] + (b[2] - a[2]) * t),
  ];
}

/** Map a value to RGB given the symmetric scale bound (max |value| > 0). */
export function divergingColor(value: number, bound: number): Rgb {
  if (bound <= 0) return CENTER;
  const t = Math.max(-1, Math.min(1, value / bound));
  return t < 0 ? lerp(CENTER, NEGATIVE_END, -t) : lerp(CENTER, POSITIVE_END, t);
}

/** True when the pixel color signals a below-zero value. */
export function isNegativeBand(color: Rgb): boolean {
  return color[2] > color[0];               // blue side of the map
}
