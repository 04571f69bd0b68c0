import type { EventFeature } from './types'

export type Cluster = {
  lat: number
  lng: number
  features: EventFeature[]
  /** badge number shown on the marker; 1 for a lone event */
  count: number
}

const TILE = 256

/** Web-Mercator pixel projection at a zoom level, enough for grid binning. */
function project(lat: number, lng: number, zoom: number): [number, number] {
  const scale = TILE * Math.pow(2, zoom)
  const x = ((lng + 180) / 360) * scale
  const sin = Math.sin((lat * Math.PI) / 180)
  const y = (0.5 - Math.log((1 + sin) / (1 - sin)) / (4 * Math.PI)) * scale
  return [x, y]
}

/** Grid clustering: features whose projected positions fall in the same
 * cell collapse into one numbered marker. Deterministic for a given zoom. */
export function clusterFeatures(
  features: EventFeature[],
  zoom: number,
  cellPx = 60,
): Cluster[] {
  const cells = new Map<string, EventFeature[]>()
  for (const feature of features) {
    const [lng, lat] = feature.geometry.coordinates
    const [x, y] = project(lat, lng, zoom)
    const key = `${Math.floor(x / cellPx)}:${Math.floor(y / cellPx)}`
    const bucket = cells.get(key)
    if (bucket) {
      bucket.push(feature)
    } else {
      cells.set(key, [feature])
    }
  }
  const clusters: Cluster[] = []
  for (const bucket of cells.values()) {
    let lat = 0
    let lng = 0
    for (const f of bucket) {
      lng += f.geometry.coordinates[0]
      lat += f.geometry.coordinates[1]
    }
    clusters.push({
      lat: lat / bucket.length,
      lng: lng / bucket.length,
      features: bucket,
      count: bucket.length,
    })
  }
  return clusters
}

/** Invariant surfaced in the UI footer: summing every cluster badge must
 * equal the feature count of the fetched collection. */
export function badgeTotal(clusters: Cluster[]): number {
  return clusters.reduce((sum, c) => sum + c.count, 0)
}

/** Stable color per disease so the legend and markers agree. */
export function colorForDisease(diseaseId: string): string {
  let hash = 0
  for (let i = 0; i < diseaseId.length; i++) {
    hash = (hash * 31 + diseaseId.charCodeAt(i)) >>> 0
  }
  return `hsl(${hash % 360} 70% 42%)`
}
