/**
 * Bounded trajectory trail: a ring buffer of recent robot positions.
 * Rendering is a pure function of the replayed state stream, so replaying
 * a recorded stream reproduces the polyline byte for byte.
 */

export interface TrailPoint {
  x: number;
  y: number;
}

export class Trail {
  private points: TrailPoint[] = [];
  private start = 0;

  constructor(readonly capacity: number = 600) {
    if (capacity < 2) {
      throw new Error("trail capacity must be at least 2");
    }
  }

  push(x: number, y: number): void {
    if (this.points.length < this.capacity) {
      this.points.push({ x, y });
    } else {
      this.points[this.start] = { x, y };
      this.start = (this.start + 1) % this.capacity;
    }
  }

  get length(): number {
    return this.points.length;
  }

  clear(): void {
    this.points = [];
    this.start = 0;
  }

  /** Points oldest to newest. */
  toArray(): TrailPoint[] {
    return [...this.points.slice(this.start), ...this.points.slice(0, this.start)];
  }

  /**
   * Canonical polyline serialization used by the renderer and tests:
   * "x,y x,y ..." with full float precision.
   */
  toPolyline(): string {
    return this.toArray()
      .map((p) => `${p.x},${p.y}`)
      .join(" ");
  }
}
