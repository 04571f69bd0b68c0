import L from 'leaflet'
import 'leaflet/dist/leaflet.css'
import './style.css'

import { apiBase, fetchDiseases, makeEventsFetcher, ApiError } from './api'
import { badgeTotal, clusterFeatures, colorForDisease, type Cluster } from './cluster'
import {
  DEFAULT_DAYS,
  MAX_DAYS,
  MIN_DAYS,
  parseFilters,
  serializeFilters,
  type Filters,
} from './filters'
import { popupHtml } from './popup'
import type { EventCollection } from './types'

const PAKISTAN_CENTER: [number, number] = [30.5, 69.5]

const app = document.querySelector<HTMLDivElement>('#app')
if (!app) throw new Error('Missing #app container')

app.innerHTML = `
  <header class="top-bar">
    <div class="brand">Outbreak Map</div>
    <div class="controls">
      <label>Disease
        <select id="disease-select"><option value="">All diseases</option></select>
      </label>
      <label>Days <span id="days-value">${DEFAULT_DAYS}</span>
        <input id="days-slider" type="range" min="${MIN_DAYS}" max="${MAX_DAYS}"
               value="${DEFAULT_DAYS}" />
      </label>
      <button id="clear-btn" type="button">Clear filters</button>
    </div>
    <div id="count-badge" class="count-badge">…</div>
  </header>
  <div id="error-banner" class="error-banner hidden">
    <span id="error-text"></span>
    <button id="retry-btn" type="button">Retry</button>
  </div>
  <div id="map"></div>
  <footer id="legend" class="legend"></footer>
`

const base = apiBase()
const fetchEvents = makeEventsFetcher(base)

const map = L.map('map').setView(PAKISTAN_CENTER, 5)
L.tileLayer('https://tile.openstreetmap.org/{z}/{x}/{y}.png', {
  maxZoom: 18,
  attribution: '&copy; OpenStreetMap contributors',
}).addTo(map)

const markerLayer = L.layerGroup().addTo(map)

let filters: Filters = parseFilters(window.location.search)
let current: EventCollection | null = null

const diseaseSelect = document.querySelector<HTMLSelectElement>('#disease-select')!
const daysSlider = document.querySelector<HTMLInputElement>('#days-slider')!
const daysValue = document.querySelector<HTMLSpanElement>('#days-value')!
const countBadge = document.querySelector<HTMLDivElement>('#count-badge')!
const errorBanner = document.querySelector<HTMLDivElement>('#error-banner')!
const errorText = document.querySelector<HTMLSpanElement>('#error-text')!
const legend = document.querySelector<HTMLElement>('#legend')!

function syncControls(): void {
  diseaseSelect.value = filters.disease ?? ''
  daysSlider.value = String(filters.days)
  daysValue.textContent = String(filters.days)
}

function syncUrl(): void {
  const qs = serializeFilters(filters)
  const url = qs ? `${window.location.pathname}?${qs}` : window.location.pathname
  window.history.replaceState(null, '', url)
}

function clusterIcon(cluster: Cluster): L.DivIcon {
  const color = colorForDisease(cluster.features[0].properties.disease_id)
  const klass = cluster.count > 1 ? 'cluster-badge multi' : 'cluster-badge'
  return L.divIcon({
    className: '',
    html: `<div class="${klass}" style="background:${color}">${cluster.count}</div>`,
    iconSize: [34, 34],
  })
}

function render(): void {
  markerLayer.clearLayers()
  const features = current?.features ?? []
  const clusters = clusterFeatures(features, map.getZoom())
  for (const cluster of clusters) {
    const marker = L.marker([cluster.lat, cluster.lng], { icon: clusterIcon(cluster) })
    if (cluster.count === 1) {
      marker.bindPopup(popupHtml(cluster.features[0]))
    } else {
      // numbered cluster: click zooms in to expand
      marker.on('click', () => {
        map.setView([cluster.lat, cluster.lng], Math.min(map.getZoom() + 2, 14))
      })
    }
    marker.addTo(markerLayer)
  }
  const total = badgeTotal(clusters)
  countBadge.textContent = `${total} event${total === 1 ? '' : 's'}`
  renderLegend(features.map((f) => f.properties))
}

function renderLegend(props: { disease_id: string; disease_english: string | null }[]): void {
  const seen = new Map<string, string>()
  for (const p of props) {
    if (!seen.has(p.disease_id)) seen.set(p.disease_id, p.disease_english ?? p.disease_id)
  }
  legend.innerHTML = [...seen.entries()]
    .map(
      ([id, name]) =>
        `<span class="legend-item"><i style="background:${colorForDisease(id)}"></i>${name}</span>`,
    )
    .join('')
}

async function refresh(): Promise<void> {
  errorBanner.classList.add('hidden')
  try {
    const doc = await fetchEvents(filters)
    if (doc === null) return // a newer request superseded this one
    current = doc
    render()
  } catch (err) {
    errorText.textContent =
      err instanceof ApiError ? err.message : `Unexpected error: ${err}`
    errorBanner.classList.remove('hidden')
  }
}

function applyFilters(next: Filters): void {
  filters = next
  syncControls()
  syncUrl()
  void refresh()
}

diseaseSelect.addEventListener('change', () => {
  applyFilters({ ...filters, disease: diseaseSelect.value || null })
})
daysSlider.addEventListener('change', () => {
  applyFilters({ ...filters, days: Number(daysSlider.value) })
})
daysSlider.addEventListener('input', () => {
  daysValue.textContent = daysSlider.value
})
document.querySelector('#clear-btn')!.addEventListener('click', () => {
  applyFilters({ disease: null, city: null, days: DEFAULT_DAYS })
})
document.querySelector('#retry-btn')!.addEventListener('click', () => void refresh())
map.on('zoomend', render)

void fetchDiseases(base)
  .then((diseases) => {
    for (const d of diseases) {
      const option = document.createElement('option')
      option.value = d.disease_id
      option.textContent = `${d.english} (${d.urdu})`
      diseaseSelect.appendChild(option)
    }
    syncControls()
  })
  .catch(() => {
    /* dropdown stays "All diseases"; the error banner covers fetch failures */
  })

syncControls()
void refresh()
