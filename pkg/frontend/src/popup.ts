import { colorForDisease } from './cluster'
import type { EventFeature } from './types'

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
}

/** Popup panel for one event: disease (Urdu right-to-left + English), city,
 * ISO date, and every merged source link opening in a new tab. */
export function popupHtml(feature: EventFeature): string {
  const p = feature.properties
  const color = colorForDisease(p.disease_id)
  const diseaseUrdu = p.disease_urdu
    ? `<span class="urdu" dir="rtl">${escapeHtml(p.disease_urdu)}</span> `
    : ''
  const cityUrdu = p.city_urdu
    ? ` <span class="urdu" dir="rtl">${escapeHtml(p.city_urdu)}</span>`
    : ''
  const links = p.links
    .map(
      (url, i) =>
        `<li><a href="${escapeHtml(url)}" target="_blank" rel="noopener">` +
        `Source ${i + 1}</a></li>`,
    )
    .join('')
  return `
    <div class="popup">
      <div class="popup-disease" style="border-color:${color}">
        ${diseaseUrdu}<strong>${escapeHtml(p.disease_english ?? p.disease_id)}</strong>
      </div>
      <div class="popup-city">${escapeHtml(p.city_english ?? p.city_id)}${cityUrdu}</div>
      <div class="popup-date">${escapeHtml(p.event_date)}</div>
      <ul class="popup-links">${links}</ul>
    </div>`
}
